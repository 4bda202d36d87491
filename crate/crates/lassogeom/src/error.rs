//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Vector/matrix shapes do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    /// A parameter lies outside the validity range of a formula; the message
    /// names the violated threshold.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// The error bound makes no claim here (√δ ≥ √(m−1): λ outside the
    /// feasible window, or m too small for the geometry).
    #[error("bound vacuous: {0}")]
    BoundVacuous(String),

    /// An iterative routine failed to converge (diagnostics in the message).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A solver hit its iteration cap; carries the last residuals seen.
    #[error(
        "solver did not converge within {iterations} iterations \
         (objective change {objective_change:e}, optimality residual {optimality_residual:e})"
    )]
    NonConvergence {
        iterations: usize,
        objective_change: f64,
        optimality_residual: f64,
    },

    /// An operation was called on inputs that violate its documented
    /// precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Config-file or data-file parse problem.
    #[error("parse error: {0}")]
    Parse(String),

    /// Filesystem trouble while reading inputs or emitting artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
