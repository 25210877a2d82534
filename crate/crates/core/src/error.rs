use thiserror::Error;

/// Errors produced by the algebra engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ring signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("map does not extend: {0}")]
    NotExtendable(String),
    #[error("degree bound too small for extension search (bound {bound}); retry with a larger bound")]
    BoundTooSmall { bound: u128 },
    #[error("extension is not unique modulo zero maps: {0}")]
    NonUniqueExtension(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
