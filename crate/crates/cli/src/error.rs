use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {reason}")]
    Field { field: String, reason: String },
    #[error("invalid argument {name}: {reason}")]
    Usage { name: &'static str, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] spinsqueeze_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn invalid(field: &str, err: spinsqueeze_core::Error) -> Self {
        CliError::Field { field: field.to_string(), reason: err.to_string() }
    }

    pub fn usage(name: &'static str, reason: impl Into<String>) -> Self {
        CliError::Usage { name, reason: reason.into() }
    }
}
