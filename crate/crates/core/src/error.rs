use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("system is infeasible (empty polytope)")]
    Infeasible,

    #[error("system is unbounded")]
    Unbounded,

    #[error("unknown theory `{0}`")]
    UnknownTheory(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("state lies outside the theory's state space")]
    StateOutsideTheory,

    #[error("measurement Y is unavailable in theory `{0}`")]
    YUnavailable(String),

    #[error("mixed radicals: √{0} and √{1} cannot be combined")]
    MixedRadicals(u64, u64),

    #[error("malformed equivalence: {0}")]
    MalformedEquivalence(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
