use thiserror::Error;

/// Errors raised by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    /// An internal invariant failed. `step` names the construction step that
    /// produced the inconsistency.
    #[error("invariant failure in {step}: {detail}")]
    Invariant { step: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(step: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            step,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
