use std::path::PathBuf;

use thiserror::Error;

/// Command failures, each mapped to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed config, invalid initial condition or unreadable input.
    #[error("validation failed: {0}")]
    Validation(String),
    /// An integrator refused a step or lost its invariants.
    #[error("integrator failed: {0}")]
    Integrator(String),
    /// The engines disagree beyond the configured tolerances.
    #[error("comparison failed: {0}")]
    Comparison(String),
    #[error("could not write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Integrator(_) => 3,
            CliError::Comparison(_) => 4,
            CliError::Output { .. } => 1,
        }
    }

    pub(crate) fn invalid(context: &str, err: impl std::fmt::Display) -> Self {
        CliError::Validation(format!("{context}: {err}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
