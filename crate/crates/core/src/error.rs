//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by model construction, evaluation, sampling and IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tail coefficient undefined for theta = {0} (requires theta > 0)")]
    UndefinedTailCoefficient(f64),

    #[error("density underflow at hypercube boundary: {0}")]
    BoundaryUnderflow(String),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("chain failure: {0}")]
    Chain(String),

    #[error("assessment error: {0}")]
    Assessment(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
