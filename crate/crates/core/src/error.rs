use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("quadrature tolerance not met after {subdivisions} subdivisions (estimate {estimate}, error {error_estimate:e})")]
    ToleranceNotMet {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("invalid region {collar}/{slot}")]
    InvalidRegion { collar: usize, slot: usize },

    #[error("sampling failure: {0}")]
    SamplingFailure(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
