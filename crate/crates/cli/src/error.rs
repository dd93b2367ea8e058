use std::path::PathBuf;
use std::process::ExitCode;

use bwbary::BwError;

/// Failures surfaced by a subcommand, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {message}")]
    BadFile { path: PathBuf, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Numerical(_) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<BwError> for CliError {
    fn from(e: BwError) -> Self {
        match e {
            BwError::InvalidInput(_)
            | BwError::DimensionMismatch { .. }
            | BwError::KernelNotIncluded { .. }
            | BwError::InsufficientSamples { .. } => CliError::Invalid(e.to_string()),
            BwError::NotPsd { .. } | BwError::NonFinite { .. } | BwError::Numerical(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
