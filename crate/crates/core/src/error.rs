use thiserror::Error;

/// Errors reported by the library. Certification failures are not errors;
/// they are returned as a [`crate::certify::Verdict`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("depth {depth} exceeds the depth budget {budget} (set SK_DEPTH_BUDGET to raise it)")]
    DepthBudget { depth: u32, budget: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("table error at {location}: {message}")]
    Table { location: String, message: String },

    #[error("no isometry: {0}")]
    NoIsometry(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
