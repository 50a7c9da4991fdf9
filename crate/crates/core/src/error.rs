use std::path::PathBuf;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("machine index {index} out of range for ({n},{k}) machines; valid bound is {bound}")]
    IndexOutOfRange { index: u64, n: usize, k: usize, bound: u64 },

    #[error("invalid machine space: {0}")]
    InvalidMachineSpace(String),

    #[error("invalid shard: {0}")]
    InvalidShard(String),

    #[error("census merge rejected: {0}")]
    CensusMerge(String),

    #[error("census contains no {d}x{d} outputs")]
    EmptyTable { d: usize },

    #[error("block side {got} does not match table side {expected}")]
    BlockSize { expected: usize, got: usize },

    #[error("block side {0} is outside the supported range 2..=4")]
    UnsupportedSide(usize),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("matrix side {n} is smaller than block side {d}")]
    TooSmall { n: usize, d: usize },

    #[error("degenerate normalization: MaxBDM equals MinBDM ({0} bits)")]
    DegenerateNormalization(f64),

    #[error("invalid generator parameters: {0}")]
    Generator(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("arc ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),

    #[error("graph too large for brute force: {0} vertices (limit 8)")]
    BruteForceLimit(usize),

    #[error("statistics: {0}")]
    Stats(String),

    #[error("compressor unavailable: {0}")]
    CompressorUnavailable(String),

    #[error("experiment: {0}")]
    Experiment(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl std::fmt::Display, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }
}
