//! Geometry-driven error bounds for regularized noisy linear inverse problems.
//!
//! Given measurements `y = A x0 + z` with an i.i.d. Gaussian matrix `A`
//! (entries of variance 1/m) and a structured unknown `x0` (sparse or
//! low-rank), this crate provides:
//!
//! * the three classical convex estimators — the square-root lasso
//!   `min ‖y−Ax‖ + (λ/√m) f(x)`, its squared-loss variant, and the
//!   f-constrained least-norm program — with verifiable optimality
//!   certificates ([`solvers`]);
//! * the Gaussian squared distance `δ(λ∂f(x0))` of a standard normal vector
//!   to the scaled subdifferential, by closed form, analytic bound, or
//!   Monte Carlo, plus the calibration constants λ_min, λ_best, λ_max
//!   ([`geometry`], [`regularizers`]);
//! * the certified error radius `ℓ(t) = 2‖z‖(√δ+t)/(√(m−1)−√δ−t)` with its
//!   success probability, the cone-based bound for the constrained program,
//!   and the asymptotic sharp estimate `‖z‖√δ/√(m−δ)` ([`bounds`]);
//! * numerical verification of the bound's proof ingredients: the scalar
//!   comparison process, its three margin conditions, concentration
//!   frequencies, and the deterministic exceedance argument ([`proofcheck`]);
//! * a reproducible experiment harness (config-driven sweeps, CSV records,
//!   native SVG figures) behind the `lassogeom` CLI ([`harness`]).
//!
//! All randomness flows through counter-based splittable streams
//! ([`rng::SeedSpec`]): results are bitwise identical for any worker count.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod optim1d;
pub mod proofcheck;
pub mod regularizers;
pub mod rng;
pub mod solvers;
pub mod special;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
