use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("[gamma]_q = {value} is not positive for gamma = {gamma}, q = {q}; square roots would be complex")]
    NonPositiveQNumber { gamma: f64, q: f64, value: f64 },

    #[error("division by a value below the zero threshold ({0:e})")]
    DivisionByZero(f64),

    #[error("mismatched contexts: {0}")]
    ContextMismatch(String),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("inexact division in exact arithmetic: {0}")]
    InexactDivision(String),

    #[error("routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by the caller's configuration rather than a failed
    /// mathematical invariant.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::NonPositiveQNumber { .. }
                | Error::Unsupported(_)
                | Error::Parse(_)
                | Error::ContextMismatch(_)
        )
    }
}
