//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by validation, domain checks and numerical guards.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("trace must be 1 (got {0})")]
    Trace(f64),

    #[error("matrix fails positivity floor {floor:.3e} (min eigenvalue {found:.3e})")]
    Positivity { found: f64, floor: f64 },

    #[error("function {name} is undefined at {point}")]
    Domain { name: String, point: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("positivity lost during integration at step {step} (min eigenvalue {min_eig:.3e})")]
    StepFailure { step: usize, min_eig: f64 },

    #[error("matrix is numerically singular (min eigenvalue {0:.3e})")]
    Singular(f64),

    #[error("unknown function selector `{0}`")]
    UnknownSelector(String),

    #[error("malformed input document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
