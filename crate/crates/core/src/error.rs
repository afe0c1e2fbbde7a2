use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty probability vector")]
    Empty,

    #[error("component {index} is negative ({value})")]
    Negative { index: usize, value: f64 },

    #[error("components sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("non-finite component at index {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{0}")]
    Domain(String),

    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),

    #[error("no perfect matching on the positive support while residual mass {residual} remains")]
    NoPerfectMatching { residual: f64 },

    #[error("theta = {theta} lies on the crossover at {crossover}; ordering is ambiguous")]
    AmbiguousOrdering { theta: f64, crossover: f64 },

    #[error("truncation at {requested} leaves tail mass {tail}; need at least {required} terms")]
    Truncation {
        requested: usize,
        required: usize,
        tail: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
