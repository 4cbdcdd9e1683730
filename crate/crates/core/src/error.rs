use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum GbsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Raised when a brute-force routine is asked for a problem size it
    /// cannot finish in reasonable time. Callers should treat this as a
    /// hard refusal, not a retryable condition.
    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

pub type Result<T> = std::result::Result<T, GbsError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(GbsError::InvalidArgument(msg.into()))
}

pub(crate) fn scale_cap<T>(msg: impl Into<String>) -> Result<T> {
    Err(GbsError::ScaleCap(msg.into()))
}

pub(crate) fn numeric<T>(msg: impl Into<String>) -> Result<T> {
    Err(GbsError::NumericFailure(msg.into()))
}
