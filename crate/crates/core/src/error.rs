use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid scale sigma = {0} (must be positive and finite)")]
    InvalidSigma(f64),
    #[error("bernoulli parameter {value} at index {index} is outside the open interval (0, 1)")]
    InvalidBernoulli { index: usize, value: f64 },
    #[error("cosine term {0} has a zero frequency vector")]
    ZeroFrequency(usize),
    #[error("input is not binary at index {0}")]
    NotBinary(usize),
    #[error("black-box objective has no evaluation contract")]
    MissingEval,
    #[error("objective has no gradient available")]
    MissingGradient,
    #[error("operation not supported for this objective kind: {0}")]
    Unsupported(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("term index {index} out of range ({len} terms)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("descent diverged at iteration {iter} (|theta| = {norm})")]
    Diverged { iter: usize, norm: f64 },
}
