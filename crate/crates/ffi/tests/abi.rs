use std::ffi::{CStr, CString};
use std::ptr;

use graphk_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gk_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn builtin() -> *mut GkTable {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { gk_table_builtin(&mut t) }, GkStatus::Ok);
    t
}

fn generated(spec: &str) -> *mut GkGraph {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { gk_graph_generate(spec.as_ptr(), &mut g) },
        GkStatus::Ok,
        "{}",
        last_error()
    );
    g
}

#[test]
fn table_handle() {
    let t = builtin();
    unsafe {
        assert_eq!(gk_table_side(t), 3);
        let (mut km, mut fb) = (0.0, true);
        assert_eq!(gk_table_km(t, 0x001, &mut km, &mut fb), GkStatus::Ok);
        assert!(!fb && km > 0.0);
        let present = km;
        assert_eq!(gk_table_km(t, 0, &mut km, &mut fb), GkStatus::Ok);
        assert!(fb && km > present);
        assert_eq!(gk_table_km(t, 0x200, &mut km, &mut fb), GkStatus::InvalidArgument);
        gk_table_free(t);
        assert_eq!(gk_table_side(ptr::null()), 0);
        gk_table_free(ptr::null_mut());
    }
}

#[test]
fn nbdm_matches_library() {
    let t = builtin();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(gk_graph_new(16, &mut g), GkStatus::Ok);
        let mut r = GkNbdm::default();
        assert_eq!(gk_nbdm(g, t, 5, 1, &mut r), GkStatus::Ok);
        let lib = graphk::bdm::nbdm(&graphk::graph::Graph::empty(16), &graphk::table::desk_table(), 3, 5, 1).unwrap();
        assert_eq!(
            (r.raw, r.min, r.max, r.normalized),
            (lib.raw, lib.min, lib.max, lib.normalized)
        );
        assert!(r.normalized >= 0.0 && r.normalized < 0.05);
        gk_graph_free(g);
        gk_table_free(t);
    }
}

#[test]
fn matrix_and_graph_bdm_agree() {
    let t = builtin();
    let g = generated(r#"{"family":"er-gnp","n":12,"p":0.4,"seed":9}"#);
    unsafe {
        let n = gk_graph_order(g);
        let mut via_graph = 0.0;
        assert_eq!(gk_graph_bdm(g, t, &mut via_graph), GkStatus::Ok);
        // rebuild the matrix through edge insertion
        let mut h = ptr::null_mut();
        assert_eq!(gk_graph_new(n, &mut h), GkStatus::Ok);
        let mut cells = vec![0u8; n * n];
        let spec = graphk::graph::GeneratorSpec::new(graphk::graph::Family::ErGnp { n: 12, p: 0.4 }, 9);
        for (u, v) in graphk::graph::generate(&spec).unwrap().edges() {
            assert_eq!(gk_graph_add_edge(h, u, v), GkStatus::Ok);
            cells[u * n + v] = 1;
            cells[v * n + u] = 1;
        }
        let (mut via_matrix, mut via_h) = (0.0, 0.0);
        assert_eq!(gk_matrix_bdm(cells.as_ptr(), n, t, &mut via_matrix), GkStatus::Ok);
        assert_eq!(gk_graph_bdm(h, t, &mut via_h), GkStatus::Ok);
        assert_eq!(via_graph, via_matrix);
        assert_eq!(via_graph, via_h);
        gk_graph_free(g);
        gk_graph_free(h);
        gk_table_free(t);
    }
}

#[test]
fn automorphisms_and_compression() {
    let g = generated(r#"{"family":"cycle","n":20,"seed":0}"#);
    unsafe {
        let (mut log2, mut orbits) = (0.0, 0);
        assert_eq!(gk_aut(g, &mut log2, &mut orbits), GkStatus::Ok);
        assert!((log2 - 40f64.log2()).abs() < 1e-12);
        assert_eq!(orbits, 1);
        let mut bytes = 0;
        assert_eq!(gk_compressed_length(g, 9, &mut bytes), GkStatus::Ok);
        assert!(bytes > 0);
        assert_eq!(gk_compressed_length(g, 12, &mut bytes), GkStatus::InvalidArgument);
        gk_graph_free(g);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(gk_graph_read(ptr::null(), &mut g), GkStatus::NullPointer);
        assert!(last_error().contains("path"));

        let missing = CString::new("/nonexistent/graph.edges").unwrap();
        assert_eq!(gk_graph_read(missing.as_ptr(), &mut g), GkStatus::Io);
        assert!(last_error().contains("/nonexistent/graph.edges"));

        let text = CString::new("vertices 3\n0 1\n1 x\n").unwrap();
        assert_eq!(gk_graph_parse(text.as_ptr(), &mut g), GkStatus::Parse);
        assert!(last_error().contains(":3:"), "{}", last_error());

        let bad_spec = CString::new(r#"{"family":"ws","n":10,"k":3,"p":0.1,"seed":0}"#).unwrap();
        assert_eq!(gk_graph_generate(bad_spec.as_ptr(), &mut g), GkStatus::InvalidArgument);

        let t = builtin();
        assert_eq!(gk_graph_new(2, &mut g), GkStatus::Ok);
        let mut r = GkNbdm::default();
        assert_eq!(gk_nbdm(g, t, 1, 0, &mut r), GkStatus::TooSmall);
        assert_eq!(gk_graph_add_edge(g, 0, 5), GkStatus::InvalidArgument);
        assert_eq!(gk_graph_add_edge(g, 1, 1), GkStatus::InvalidArgument);
        assert_eq!(gk_nbdm(g, t, 1, 0, ptr::null_mut()), GkStatus::NullPointer);

        let bytes = [0xffu8, 0xfe, 0];
        assert_eq!(gk_graph_parse(bytes.as_ptr().cast(), &mut g), GkStatus::InvalidUtf8);
        gk_graph_free(g);
        gk_table_free(t);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(gk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
