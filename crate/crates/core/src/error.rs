use thiserror::Error;

/// Errors raised by the library.
///
/// Domain errors (an invalid kernel, an infeasible parameter combination) are
/// distinguished from internal numerical failures so that front ends can map
/// them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("spectral truncation failed: {0}")]
    TruncationFailure(String),

    #[error("empty interior: {0}")]
    EmptyInterior(String),

    #[error("window too small for the optimal block length: {0}")]
    NTooSmall(String),

    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal numerical error: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
