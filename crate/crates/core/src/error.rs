use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("integration diverged at step {step}: trace deviates from 1 by {deviation:.3e}")]
    IntegrationDiverged { step: usize, deviation: f64 },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
