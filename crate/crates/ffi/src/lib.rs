//! C ABI over the graphk toolkit.
//!
//! Tables and graphs are opaque handles created by `gk_*_load`/`gk_*_new`
//! style functions and released with the matching `_free`. Every fallible
//! call returns a [`GkStatus`]; on failure the message is available from
//! [`gk_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use graphk::bdm;
use graphk::compress::{graph_compressed_length, Deflate};
use graphk::graph::{generate, parse_edges, read_edges, GeneratorSpec, Graph};
use graphk::matrix::BitMatrix;
use graphk::table::{desk_table, BlockDistribution};
use graphk::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    BlockSize = 6,
    TooSmall = 7,
    DegenerateNormalization = 8,
    CompressorUnavailable = 9,
    /// A Rust panic was caught at the boundary.
    Internal = 10,
}

/// CTM block table handle.
pub struct GkTable(BlockDistribution);

/// Undirected graph handle.
pub struct GkGraph(Graph);

/// Normalized BDM result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GkNbdm {
    pub raw: f64,
    pub min: f64,
    pub max: f64,
    pub normalized: f64,
    pub raw_exceeds_max: bool,
    pub fallback_lookups: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GkStatus {
    match e {
        Error::Io { .. } => GkStatus::Io,
        Error::Parse { .. } | Error::Json(_) => GkStatus::Parse,
        Error::BlockSize { .. } | Error::UnsupportedSide(_) => GkStatus::BlockSize,
        Error::TooSmall { .. } => GkStatus::TooSmall,
        Error::DegenerateNormalization(_) => GkStatus::DegenerateNormalization,
        Error::CompressorUnavailable(_) => GkStatus::CompressorUnavailable,
        _ => GkStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (GkStatus, String)>) -> GkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GkStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GkStatus::Internal
        }
    }
}

fn lift<T>(r: graphk::Result<T>) -> Result<T, (GkStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (GkStatus, String) {
    (GkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GkStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (GkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GkStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GkStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failing call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a native or external `hex<TAB>km` table file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_table_load(path: *const c_char, out: *mut *mut GkTable) -> GkStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        *out = boxed(GkTable(lift(BlockDistribution::load(path))?));
        Ok(())
    })
}

/// The built-in d=3 table.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_table_builtin(out: *mut *mut GkTable) -> GkStatus {
    guard(|| {
        *out_arg(out, "out")? = boxed(GkTable(desk_table()));
        Ok(())
    })
}

/// Block side of a table, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gk_table_side(table: *const GkTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.side())
}

/// km of the block whose cells, row-major with the first cell in the most
/// significant of the low d*d bits, are `bits`.
///
/// # Safety
/// `table` must be a live handle; `km` and `fallback` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_table_km(table: *const GkTable, bits: u16, km: *mut f64, fallback: *mut bool) -> GkStatus {
    guard(|| {
        let t = ref_arg(table, "table")?;
        let d = t.0.side();
        if u32::from(bits) >> (d * d) != 0 {
            return Err((
                GkStatus::InvalidArgument,
                format!("bits {bits:#x} exceed a {d}x{d} block"),
            ));
        }
        let look = t.0.km_bits(bits);
        *out_arg(km, "km")? = look.km;
        *out_arg(fallback, "fallback")? = look.fallback;
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gk_table_free(table: *mut GkTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Edgeless graph on `n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_new(n: usize, out: *mut *mut GkGraph) -> GkStatus {
    guard(|| {
        *out_arg(out, "out")? = boxed(GkGraph(Graph::empty(n)));
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_add_edge(graph: *mut GkGraph, u: usize, v: usize) -> GkStatus {
    guard(|| {
        let g = out_arg(graph, "graph")?;
        let n = g.0.order();
        if u >= n || v >= n {
            return lift(Err(Error::VertexOutOfRange(u, v, n)));
        }
        if u == v {
            return Err((GkStatus::InvalidArgument, format!("self-loop at {u}")));
        }
        g.0.add_edge(u, v);
        Ok(())
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_read(path: *const c_char, out: *mut *mut GkGraph) -> GkStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        *out = boxed(GkGraph(lift(read_edges(path))?));
        Ok(())
    })
}

/// Parses edge-list text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_parse(text: *const c_char, out: *mut *mut GkGraph) -> GkStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let out = out_arg(out, "out")?;
        let g = lift(parse_edges(text, "<text>").and_then(|e| e.into_graph()))?;
        *out = boxed(GkGraph(g));
        Ok(())
    })
}

/// Generates a graph from a JSON spec such as
/// `{"family":"ba","n":100,"m":2,"seed":1}`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_generate(spec_json: *const c_char, out: *mut *mut GkGraph) -> GkStatus {
    guard(|| {
        let text = str_arg(spec_json, "spec_json")?;
        let out = out_arg(out, "out")?;
        let spec: GeneratorSpec = lift(serde_json::from_str(text).map_err(Error::from))?;
        *out = boxed(GkGraph(lift(generate(&spec))?));
        Ok(())
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_order(graph: *const GkGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.order())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_edge_count(graph: *const GkGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_free(graph: *mut GkGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// BDM of an n x n matrix given as row-major bytes, nonzero meaning 1.
///
/// # Safety
/// `cells` must point to `n * n` readable bytes; `table` must be a live
/// handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_matrix_bdm(cells: *const u8, n: usize, table: *const GkTable, out: *mut f64) -> GkStatus {
    guard(|| {
        if cells.is_null() {
            return Err(null("cells"));
        }
        let t = ref_arg(table, "table")?;
        let out = out_arg(out, "out")?;
        let len = n
            .checked_mul(n)
            .ok_or_else(|| (GkStatus::InvalidArgument, "n*n overflows".to_string()))?;
        let data = std::slice::from_raw_parts(cells, len);
        let m = BitMatrix::from_fn(n, |r, c| data[r * n + c] != 0);
        *out = lift(bdm::bdm(&m, &t.0, t.0.side()))?.value;
        Ok(())
    })
}

/// BDM of the adjacency matrix in the graph's own vertex order.
///
/// # Safety
/// `graph` and `table` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_graph_bdm(graph: *const GkGraph, table: *const GkTable, out: *mut f64) -> GkStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        let t = ref_arg(table, "table")?;
        *out_arg(out, "out")? = lift(bdm::bdm(g.0.adjacency(), &t.0, t.0.side()))?.value;
        Ok(())
    })
}

/// Normalized BDM minimized over the identity and `perms - 1` seeded
/// random vertex orderings.
///
/// # Safety
/// `graph` and `table` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_nbdm(
    graph: *const GkGraph,
    table: *const GkTable,
    perms: usize,
    seed: u64,
    out: *mut GkNbdm,
) -> GkStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        let t = ref_arg(table, "table")?;
        let out = out_arg(out, "out")?;
        let r = lift(bdm::nbdm(&g.0, &t.0, t.0.side(), perms, seed))?;
        *out = GkNbdm {
            raw: r.raw,
            min: r.min,
            max: r.max,
            normalized: r.normalized,
            raw_exceeds_max: r.raw_exceeds_max,
            fallback_lookups: r.fallback_lookups,
        };
        Ok(())
    })
}

/// log2 of the automorphism group order and the number of vertex orbits.
///
/// # Safety
/// `graph` must be a live handle; `log2_order` and `orbits` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gk_aut(graph: *const GkGraph, log2_order: *mut f64, orbits: *mut usize) -> GkStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        let a = lift(graphk::aut::aut_size(&g.0))?;
        *out_arg(log2_order, "log2_order")? = a.log2_order();
        *out_arg(orbits, "orbits")? = a.orbits.len();
        Ok(())
    })
}

/// DEFLATE length in bytes of the bit-packed adjacency matrix.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gk_compressed_length(graph: *const GkGraph, level: u32, out: *mut usize) -> GkStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        if level > 9 {
            return Err((GkStatus::InvalidArgument, format!("compression level {level} above 9")));
        }
        *out_arg(out, "out")? = lift(graph_compressed_length(&g.0, &Deflate { level }))?;
        Ok(())
    })
}
