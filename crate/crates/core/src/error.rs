use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generation failed: {0}")]
    GenerationFailure(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("no embedding found after {tries} tries")]
    EmbeddingNotFound { tries: usize },

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("chain strength bracket [0, {hi}] exhausted without maintaining every chain")]
    BracketExhausted { hi: f64 },

    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
