use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("window has {got} samples, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("series of length {len} is too short (need at least {needed})")]
    SeriesTooShort { len: usize, needed: usize },

    #[error("empty series")]
    EmptySeries,

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("pattern kind {0} is not supported here; amplitude permutations are required")]
    UnsupportedKind(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("labels: {0}")]
    Labels(String),

    #[error("segmentation: {0}")]
    Segmentation(String),
}
