use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller violated an operation's precondition (bad letter index,
    /// capacity mismatch, out-of-domain parameter).
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed automaton text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("automaton is not synchronizing")]
    NotSynchronizing,

    /// The search could not finish within the available resources.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An internal invariant was breached. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
