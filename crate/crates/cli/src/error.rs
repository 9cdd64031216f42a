use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("invalid config: {field}: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Engine(#[from] ri_et::Error),
    #[error("{failed} of {total} sweep points failed")]
    SweepFailed { failed: usize, total: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Threads(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn config_err<T>(field: &'static str, message: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config { field, message: message.into() })
}
