use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point or direction outside the domain: {0}")]
    OutsideDomain(String),

    #[error("unbounded sector on axis {0}")]
    Unbounded(usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("missing family element: {0}")]
    MissingElement(String),

    #[error("no convergence: {what} (best estimate error {error:.3e})")]
    NonConvergence { what: String, error: f64 },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("incoherent family: {0}")]
    Incoherent(String),

    #[error("unknown testbed entry `{0}`")]
    UnknownEntry(String),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
