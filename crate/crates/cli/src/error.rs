use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Quadrature(bellspace::Error),

    #[error("{0}")]
    TooLarge(bellspace::Error),

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("paper self-test failed: {}", .0.join("; "))]
    PaperCheck(Vec<String>),

    #[error("{0}")]
    Compute(bellspace::Error),
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::PaperCheck(_) => 1,
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Quadrature(_) => 3,
            CliError::TooLarge(_) => 4,
            CliError::Write { .. } => 5,
            CliError::Compute(_) => 6,
        }
    }
}

impl From<bellspace::Error> for CliError {
    fn from(e: bellspace::Error) -> Self {
        match e {
            bellspace::Error::QuadratureNotConverged { .. } => CliError::Quadrature(e),
            bellspace::Error::TooLarge(_) => CliError::TooLarge(e),
            other => CliError::Compute(other),
        }
    }
}
