use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qmonogamy::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot access {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(qmonogamy::Error::Unsupported(_)) => EXIT_UNSUPPORTED,
            Self::Core(qmonogamy::Error::NumericalIntegrity { .. }) | Self::Violation(_) => EXIT_VIOLATION,
            Self::Core(_) | Self::Invalid(_) | Self::Io { .. } => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
