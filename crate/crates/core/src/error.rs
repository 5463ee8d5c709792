use thiserror::Error;

/// Errors raised by state construction, measure evaluation and the monogamy checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized (norm {norm:.3e} off by {deviation:.3e})")]
    NotNormalized { norm: f64, deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// A measure came out negative by more than roundoff.
    #[error("numerical integrity failure: {what} = {value:.3e}")]
    NumericalIntegrity { what: String, value: f64 },

    /// No exact or optimizer route exists for the requested measure on this input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
