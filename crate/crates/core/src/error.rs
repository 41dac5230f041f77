use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter or evaluation point lies outside its admitted range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural argument (depth, grid size, block index, ...) is invalid.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested computation exceeds a hard size limit.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The level index is too small for the requested block structure.
    #[error("n too small: {0}")]
    NTooSmall(String),

    /// A user supplied periodic function fails validation.
    #[error("invalid law: {0}")]
    InvalidLaw(String),

    /// The degenerate uniform case has no non-trivial limit law.
    #[error("degenerate parameters: beta = 1/2 with p = 1/2 gives the uniform law")]
    Degenerate,

    /// An estimator had no data to work with (for example no exceedances).
    #[error("estimate undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
