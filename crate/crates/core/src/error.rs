use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{routine} failed to converge after {iterations} iterations ({detail})")]
    NumericFailure {
        routine: &'static str,
        iterations: usize,
        detail: String,
    },

    #[error("parameter map is singular: |denominator| = {denominator:e}")]
    SingularMap { denominator: f64 },

    #[error("Lambda = {lambda} lies on the hyperbolic boundary orbit; no finite (lambda, phi) reaches it")]
    BoundaryOrbit { lambda: Complex64 },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("state is truncation-unsafe: tail mass {tail_mass:e} exceeds {threshold:e}")]
    TruncationUnsafe { tail_mass: f64, threshold: f64 },

    #[error("truncation budget exceeded: cutoff-doubling change {delta:e} > {limit:e}; raise the cutoff")]
    TruncationBudget { delta: f64, limit: f64 },

    #[error("no genuine eigenvector available: {0}")]
    NoGenuineState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
