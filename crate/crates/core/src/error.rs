//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// `Domain` marks precondition violations (an energy inside the band, a zero
/// divisor, the missing μ=0 eigenvalue). `Accuracy` carries the best estimate
/// produced before a tolerance ran out of attainable precision. `Resolution`
/// signals that a finite truncation is too small to resolve the requested
/// feature and a larger one is needed.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy error: {context} (best estimate {best:e}, error ~{error_estimate:e})")]
    Accuracy {
        best: f64,
        error_estimate: f64,
        context: String,
    },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
