use thiserror::Error;

/// Errors raised anywhere in the block pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a {1}-core")]
    InvalidCore(String, usize),

    #[error("element is not rational: {0}")]
    NonRational(String),

    #[error("orthogonality violated: {0}")]
    OrthogonalityViolation(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("invalid cache file {path}: {reason}")]
    CacheInvalid { path: String, reason: String },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("{what} exceeds the configured cap {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("prime {0} is not supported by this operation")]
    UnsupportedPrime(usize),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("enumeration incomplete: found {found} of {expected} representatives below size {cap}")]
    EnumerationIncomplete { found: usize, expected: usize, cap: usize },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error signals a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Consistency(_) | Error::OrthogonalityViolation(_) | Error::NonRational(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
