//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids ({0} vs {1} samples)")]
    GridMismatch(usize, usize),

    #[error("operation requires a nonzero-norm field")]
    ZeroNorm,

    #[error("mass must be strictly positive, got {0}")]
    NonpositiveMass(f64),

    #[error("invalid physical context: {0}")]
    InvalidContext(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("speed {v} exceeds (or reaches) the causal limit c = {c}")]
    SpeedLimit { v: f64, c: f64 },

    #[error("invalid ring configuration: {0}")]
    InvalidRing(String),

    #[error("generator {label} is not defined in representation {rep}")]
    UnknownGenerator { label: String, rep: String },

    #[error("representation mismatch: {0} vs {1}")]
    RepMismatch(String, String),

    #[error("invalid evolution parameters: {0}")]
    InvalidParams(String),

    #[error("time step too large for the second-difference estimate: step-halving disagreement {0:.3e}")]
    DtTooLarge(f64),

    #[error("slope fit needs at least two strictly positive samples")]
    DegenerateFit,
}
