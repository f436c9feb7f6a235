use thiserror::Error;

/// Errors raised by the wedgelab library.
#[derive(Debug, Error)]
pub enum Error {
    /// Arguments live in different spaces, or lie outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical routine failed to converge or produced an unusable result.
    #[error("numeric failure: {message} (condition estimate {condition:.3e})")]
    Numeric { message: String, condition: f64 },

    /// The requested operation is not supported for this model or algebra.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A closed-form expression hit a pole.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Structural problem in an input document.
    #[error("invalid input at {location}: {message}")]
    Invalid { location: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, condition: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            condition,
        }
    }

    pub(crate) fn invalid(location: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Invalid {
            location: location.into(),
            message: msg.into(),
        }
    }
}
