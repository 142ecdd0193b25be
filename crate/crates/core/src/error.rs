//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("vector dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("series power requires unit constant term, got {got}")]
    Normalization { got: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("numeric failure in {what}: achieved error estimate {achieved:.3e}")]
    NumericFailure { what: String, achieved: f64 },

    #[error("argument outside certified domain: {what} = {value:.6e}, limit {limit:.6e}")]
    OutOfDomain {
        what: String,
        value: f64,
        limit: f64,
    },

    #[error("singular configuration: bodies {i} and {j} are separated by {separation:.3e}")]
    SingularConfiguration { i: usize, j: usize, separation: f64 },

    #[error("fixed-point iteration did not converge after {iterations} sweeps (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("unsupported stage count {0} (supported: 1..=8)")]
    UnsupportedStages(usize),

    #[error("invalid system description: {0}")]
    InvalidSystem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
