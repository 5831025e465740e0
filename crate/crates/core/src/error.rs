use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected record {raw:?}: {reason}")]
    RejectedRecord { raw: String, reason: &'static str },

    #[error("vertex index {index} out of range for graph with {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("dimension mismatch: expected {expected} rows, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite score at vertex {vertex} after iteration {iteration}")]
    NonFinite { vertex: usize, iteration: usize },

    #[error("dense solve refused: {vertices} vertices exceeds cap of {cap}")]
    DenseCapExceeded { vertices: usize, cap: usize },

    #[error("dense system is singular")]
    Singular,

    #[error("expected edge count {expected:.0} exceeds cap of {cap}")]
    EdgeCapExceeded { expected: f64, cap: u64 },

    #[error("no ground-truth key is covered by the verdicts")]
    EmptyEvaluation,

    #[error("undefined metric: {0}")]
    Undefined(&'static str),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unsupported snapshot version {0}")]
    SnapshotVersion(u32),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit status: 2 for validation failures, 3 for I/O, 4 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::NonFinite { .. } | Error::Singular => 4,
            _ => 2,
        }
    }
}
