//! Compressed-length baseline. DEFLATE is provided by flate2; a command
//! adapter can run any external compressor that reads stdin and writes
//! stdout.

use std::io::Write;
use std::process::{Command, Stdio};

use flate2::write::DeflateEncoder;
use flate2::Compression;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// DEFLATE level used throughout unless configured otherwise.
pub const DEFAULT_LEVEL: u32 = 9;

pub trait Compressor: Send + Sync {
    /// Short identifier recorded in experiment headers.
    fn describe(&self) -> String;
    fn compress(&self, payload: &[u8]) -> Result<Vec<u8>>;

    fn compressed_length(&self, payload: &[u8]) -> Result<usize> {
        Ok(self.compress(payload)?.len())
    }
}

/// Raw DEFLATE stream, no container header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deflate {
    pub level: u32,
}

impl Default for Deflate {
    fn default() -> Self {
        Deflate { level: DEFAULT_LEVEL }
    }
}

impl Compressor for Deflate {
    fn describe(&self) -> String {
        format!("deflate-{}", self.level)
    }

    fn compress(&self, payload: &[u8]) -> Result<Vec<u8>> {
        let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(self.level));
        enc.write_all(payload).map_err(|e| Error::io("<deflate>", e))?;
        enc.finish().map_err(|e| Error::io("<deflate>", e))
    }
}

/// Pipes the payload through an external program, e.g. `gzip -9 -n -c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalCommand {
    pub fn new(program: impl Into<String>, args: &[&str]) -> Self {
        ExternalCommand {
            program: program.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Compressor for ExternalCommand {
    fn describe(&self) -> String {
        std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn compress(&self, payload: &[u8]) -> Result<Vec<u8>> {
        let unavailable = |msg: String| Error::CompressorUnavailable(format!("{}: {msg}", self.program));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| unavailable(e.to_string()))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let data = payload.to_vec();
        let writer = std::thread::spawn(move || stdin.write_all(&data));
        let out = child.wait_with_output().map_err(|e| unavailable(e.to_string()))?;
        writer
            .join()
            .map_err(|_| unavailable("writer thread panicked".into()))?
            .map_err(|e| unavailable(e.to_string()))?;
        if !out.status.success() {
            return Err(unavailable(format!("exited with {}", out.status)));
        }
        Ok(out.stdout)
    }
}

/// Compressed length of a payload with the default DEFLATE level.
pub fn compressed_length(payload: &[u8]) -> Result<usize> {
    Deflate::default().compressed_length(payload)
}

/// Compressed length of the bit-packed adjacency matrix.
pub fn graph_compressed_length(g: &Graph, c: &dyn Compressor) -> Result<usize> {
    c.compressed_length(&g.adjacency().pack_bytes())
}
