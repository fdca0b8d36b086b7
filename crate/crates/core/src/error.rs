use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not MES: reduced state deviates from I/d by {deviation:e}")]
    NotMaximallyEntangled { deviation: f64 },

    #[error("states {i} and {j} are not orthogonal (|overlap| = {overlap:e})")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },

    #[error("measurement basis is not orthonormal (Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("mixedness recipe defined only for m = d (got m = {m}, d = {d})")]
    MixednessNeedsMEqualsD { m: usize, d: usize },

    #[error("out of scope: {0}")]
    Unsupported(String),

    #[error("outcome unreachable (probability {probability:e})")]
    UnreachableOutcome { probability: f64 },

    #[error("invalid Bell index ({n}, {m}) for d = {d}")]
    InvalidIndex { n: usize, m: usize, d: usize },

    #[error("duplicate Bell index ({n}, {m})")]
    DuplicateIndex { n: usize, m: usize },

    #[error("invalid probability list: {0}")]
    InvalidProbabilities(String),

    #[error("operator is not positive semidefinite: {0}")]
    NotPositive(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
