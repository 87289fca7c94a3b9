use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {n} is below the minimum {min} for {what}")]
    DimensionTooSmall {
        n: usize,
        min: usize,
        what: &'static str,
    },

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("tensor violates index symmetries (normalized residual {residual:e})")]
    SymmetryViolation { residual: f64 },

    #[error("tensor violates the first Bianchi identity (normalized residual {residual:e})")]
    BianchiViolation { residual: f64 },

    #[error("input is not Einstein (|Ric0|/|Ric| = {ratio:e})")]
    NotEinstein { ratio: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("individual |S^j W|^2 values are basis dependent (eigenvalue gap {gap:e})")]
    DegenerateEigenspace { gap: f64 },

    #[error("spectrum mean is zero")]
    ZeroMean,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed tensor document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
