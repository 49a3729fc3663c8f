use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected {expected} points, found {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("generator set is empty")]
    EmptyGenerators,

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("set of {size} points exceeds the enumeration cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("vertex budget must be at least 1")]
    ZeroBudget,

    #[error("polynomial family is empty: need at least d+1 = {needed} vertices, got k = {k}")]
    EmptyFamily { needed: usize, k: usize },

    #[error("sign pattern has length {found}, expected {expected}")]
    PatternLength { expected: usize, found: usize },

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
