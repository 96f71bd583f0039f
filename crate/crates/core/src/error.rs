use thiserror::Error;

/// Errors raised by region evaluation, optimization and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value violates the invariant of its type.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// Table or vector dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A noise correlation of magnitude one makes the degraded bound singular.
    #[error("noise correlation {0} has magnitude 1; the degraded outer bound is singular")]
    SingularCorrelation(f64),

    /// An operation that needs at least one element received none.
    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
