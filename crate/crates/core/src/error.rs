use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a cycle needs at least 2 sites, got {0}")]
    TooFewSites(usize),

    #[error("value at site {index} is not finite")]
    NonFinite { index: usize },

    #[error("negative input {value} at site {index}")]
    NegativeInput { index: usize, value: f64 },

    #[error("frequency index {k} out of range for n = {n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("n = {n} is not supported here (requires n >= {min})")]
    UnsupportedN { n: usize, min: usize },

    #[error("iteration did not converge after {iterations} steps (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("function is not orthogonal to constants and V1 (mean {mean:e}, V1 norm {v1_norm:e})")]
    NotHighFrequency { mean: f64, v1_norm: f64 },

    #[error("function is not in V1 (mean {mean:e}, off-V1 norm {residual:e})")]
    NotInV1 { mean: f64, residual: f64 },

    #[error("function is not normalized: <x^2> = {mean_square}")]
    NotNormalized { mean_square: f64 },

    #[error("negative entry {value} at site {index}")]
    NegativeEntries { index: usize, value: f64 },

    #[error("invalid scalar triple: {0}")]
    InvalidTriple(String),

    #[error("entropy {entropy:e} below floor {floor:e}")]
    DegenerateEntropy { entropy: f64, floor: f64 },

    #[error("perturbation with eps = {eps} has negative entries")]
    NegativePerturbation { eps: f64 },

    #[error("factor C_{n} is outside the tensorization hypothesis")]
    UnsupportedFactor { n: usize },

    #[error("product space has {states} states, limit is {limit}")]
    StateSpaceTooLarge { states: usize, limit: usize },

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("query is not admissible; the smallest admissible time is {min_time}")]
    InadmissibleQuery { min_time: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
