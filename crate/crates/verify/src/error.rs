use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = VerifyError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),

    /// The request does not match the session state (out-of-order or
    /// repeated verdict).
    #[error("conflict: {0}")]
    Conflict(String),

    #[error("invalid request: {0}")]
    Invalid(String),

    #[error("session incomplete, {} items remaining", remaining.len())]
    Incomplete { remaining: Vec<usize> },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Corrupt { path: PathBuf, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl VerifyError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        VerifyError::Io { path: path.into(), source }
    }
}
