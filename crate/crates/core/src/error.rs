use thiserror::Error;

/// Errors raised by model construction, coefficient computation, sampling and estimation.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("invalid input: {0}")]
    Input(String),
    /// A computation would exceed a configured size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Input is well formed but carries no usable information (e.g. a constant column).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for the capacity family, which front ends report with a distinct exit status.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
