use thiserror::Error;

/// Errors raised by the AFDM link components.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AfdmError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("path index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("delay {delay} / doppler {doppler} outside the configured bounds")]
    PathOutOfBounds { delay: usize, doppler: i64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid pilot placement: {0}")]
    InvalidPilot(String),

    #[error("matrix is not positive definite")]
    SingularSystem,

    #[error("instance too large for exhaustive search: {0} bits > {1}")]
    InstanceTooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, AfdmError>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(AfdmError::LengthMismatch { expected, actual })
    }
}
