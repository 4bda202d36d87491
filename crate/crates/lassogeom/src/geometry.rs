//! The expected squared distance δ(λ∂f(x₀)) = E‖h − P_{λ∂f(x₀)}(h)‖² for
//! standard normal h, its closed form and analytic upper bounds, Monte Carlo
//! estimation, the cone variant δ(cone(∂f(x₀))), and calibration of the
//! scale parameter λ against a measurement budget m.
//!
//! δ(λ) is strictly convex in λ with a unique minimizer λ_best; when
//! m − 1 > δ(λ_best) the equation δ(λ) = m − 1 has exactly one root on each
//! side of λ_best (λ_min may be absent when the ambient dimension n = δ(0)
//! already sits below m − 1). Those three scales drive every error bound
//! downstream.

use ndarray::ArrayView1;
use rayon::prelude::*;

use crate::optim1d::{bisect_root, golden_section_min};
use crate::regularizers::{Regularizer, ScaleProfile, SubdiffGeometry};
use crate::rng::SeedSpec;
use crate::special::erfc;
use crate::{Error, Result};

/// Samples per deterministic Monte Carlo chunk. Chunk i always draws from
/// `seed.child(i)`, so estimates are bitwise identical for any worker count.
const MC_CHUNK: usize = 4096;

/// How to evaluate δ(λ∂f(x₀)).
#[derive(Debug, Clone, Copy)]
pub enum DeltaMethod {
    /// Exact expression (ℓ₁ only).
    ClosedForm,
    /// Analytic upper bound, valid only above a regularizer-specific λ
    /// threshold.
    AnalyticBound,
    /// Sample mean of dist²(h, λ∂f(x₀)).
    MonteCarlo { samples: usize, seed: SeedSpec },
}

/// A fully specified distance query.
#[derive(Debug, Clone, Copy)]
pub struct DistanceQuery<'a> {
    pub geometry: &'a SubdiffGeometry,
    pub lambda: f64,
    pub method: DeltaMethod,
}

/// Result of a distance query; `stderr` is present only for Monte Carlo.
#[derive(Debug, Clone, Copy)]
pub struct DeltaEstimate {
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Dispatches a [`DistanceQuery`] to the matching evaluator.
pub fn delta(query: &DistanceQuery) -> Result<DeltaEstimate> {
    match query.method {
        DeltaMethod::ClosedForm => match query.geometry.regularizer() {
            Regularizer::L1 => {
                let n = query.geometry.ambient_dim();
                let k = query.geometry.structure_size();
                Ok(DeltaEstimate {
                    value: delta_l1_closed_form(n, k, query.lambda)?,
                    stderr: None,
                })
            }
            Regularizer::Nuclear { .. } => Err(Error::InvalidArgument(
                "closed-form δ is only available for the ℓ₁ regularizer".into(),
            )),
        },
        DeltaMethod::AnalyticBound => Ok(DeltaEstimate {
            value: delta_upper_bound(query.geometry, query.lambda)?,
            stderr: None,
        }),
        DeltaMethod::MonteCarlo { samples, seed } => {
            let (value, stderr) = delta_monte_carlo(query.geometry, query.lambda, samples, seed)?;
            Ok(DeltaEstimate { value, stderr: Some(stderr) })
        }
    }
}

/// Resolves δ(λ∂f) by the best method available for the regularizer: the
/// closed form for ℓ₁, common-random-number Monte Carlo (20 000 samples,
/// fixed internal seed, hence deterministic) for the nuclear norm.
pub fn delta_best_available(geometry: &SubdiffGeometry, lambda: f64) -> Result<DeltaEstimate> {
    let method = match geometry.regularizer() {
        Regularizer::L1 => DeltaMethod::ClosedForm,
        Regularizer::Nuclear { .. } => DeltaMethod::MonteCarlo {
            samples: 20_000,
            seed: SeedSpec::new(0x6375727665, 0),
        },
    };
    delta(&DistanceQuery { geometry, lambda, method })
}

/// Exact δ(λ∂f(x₀)) for a k-sparse signal under the ℓ₁ norm:
///
/// `k(1+λ²) + (n−k)·[(1+λ²)·erfc(λ/√2) − √(2/π)·λ·e^{−λ²/2}]`.
///
/// At λ = 0 this collapses to exactly n (the distance to the origin).
pub fn delta_l1_closed_form(n: usize, k: usize, lambda: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k ≤ n, got k={k}, n={n}"
        )));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale must be nonnegative, got {lambda}"
        )));
    }
    let l2 = lambda * lambda;
    let off = (1.0 + l2) * erfc(lambda / std::f64::consts::SQRT_2)
        - (2.0 / std::f64::consts::PI).sqrt() * lambda * (-0.5 * l2).exp();
    Ok(k as f64 * (1.0 + l2) + (n - k) as f64 * off)
}

/// Analytic upper bound on δ(λ∂f(x₀)), valid only above a threshold scale:
/// for ℓ₁, (λ² + 3)·k needs λ ≥ √(2 ln(n/k)); for the nuclear norm,
/// λ²r + 2√n(r+1) needs λ ≥ 2n^{1/4} (n = d²).
pub fn delta_upper_bound(geometry: &SubdiffGeometry, lambda: f64) -> Result<f64> {
    let n = geometry.ambient_dim();
    match geometry.regularizer() {
        Regularizer::L1 => {
            let k = geometry.structure_size();
            let threshold = (2.0 * (n as f64 / k as f64).ln()).sqrt();
            if lambda < threshold {
                return Err(Error::OutOfRange(format!(
                    "ℓ₁ distance bound needs λ ≥ √(2 ln(n/k)) = {threshold}, got {lambda}"
                )));
            }
            Ok((lambda * lambda + 3.0) * k as f64)
        }
        Regularizer::Nuclear { .. } => {
            let r = geometry.structure_size();
            let threshold = 2.0 * (n as f64).powf(0.25);
            if lambda < threshold {
                return Err(Error::OutOfRange(format!(
                    "nuclear distance bound needs λ ≥ 2n^(1/4) = {threshold}, got {lambda}"
                )));
            }
            Ok(lambda * lambda * r as f64 + 2.0 * (n as f64).sqrt() * (r as f64 + 1.0))
        }
    }
}

/// Splits `samples` into fixed chunks, runs `work` per chunk (possibly in
/// parallel), and reduces `(sum, sumsq)` in chunk order. Returns
/// (mean, standard error of the mean).
fn chunked_mean_stderr<W>(samples: usize, work: W) -> (f64, f64)
where
    W: Fn(usize, usize) -> (f64, f64) + Sync,
{
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            work(c, len)
        })
        .collect();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for (s, s2) in partials {
        sum += s;
        sumsq += s2;
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let var = ((sumsq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Monte Carlo estimate of δ(λ∂f(x₀)): sample mean and standard error of
/// dist²(h, λ∂f(x₀)) over i.i.d. standard normal h. Deterministic given the
/// seed and independent of the worker count (fixed chunking, fixed
/// reduction order).
pub fn delta_monte_carlo(
    geometry: &SubdiffGeometry,
    lambda: f64,
    samples: usize,
    seed: SeedSpec,
) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale must be nonnegative, got {lambda}"
        )));
    }
    Ok(chunked_mean_stderr(samples, |chunk, len| {
        let mut rng = seed.child(chunk as u64).rng();
        let mut s = 0.0;
        let mut s2 = 0.0;
        for _ in 0..len {
            let d = geometry.dist_sq_sampled(lambda, &mut rng);
            s += d;
            s2 += d * d;
        }
        (s, s2)
    }))
}

/// Squared distance from a fixed h to cone(∂f(x₀)) = ∪_{λ≥0} λ∂f(x₀):
/// the minimum over λ ≥ 0 of dist²(h, λ∂f(x₀)), which is convex in λ.
pub fn cone_dist_sq(geometry: &SubdiffGeometry, h: &ArrayView1<f64>) -> Result<f64> {
    Ok(geometry.scale_profile(h)?.min_over_scale()?.1)
}

/// Monte Carlo estimate of δ(cone(∂f(x₀))). Each sample solves the inner
/// 1-D convex minimization over the scale; chunking matches
/// [`delta_monte_carlo`], so with the same seed the two estimators share
/// their h samples draw for draw.
pub fn delta_cone_monte_carlo(
    geometry: &SubdiffGeometry,
    samples: usize,
    seed: SeedSpec,
) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<Result<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut rng = seed.child(c as u64).rng();
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..len {
                let profile = geometry.scale_profile_sampled(&mut rng);
                let (_, d) = profile.min_over_scale()?;
                s += d;
                s2 += d * d;
            }
            Ok((s, s2))
        })
        .collect();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for p in partials {
        let (s, s2) = p?;
        sum += s;
        sumsq += s2;
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let var = ((sumsq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Ok((mean, (var / nf).sqrt()))
}

/// How [`calibrate`] evaluates δ(λ).
#[derive(Debug, Clone, Copy)]
pub enum CalibrationMethod {
    /// Exact expression (ℓ₁ only).
    ClosedForm,
    /// Monte Carlo with common random numbers: the same h samples are reused
    /// at every probed λ, so the searched function is smooth in λ.
    MonteCarlo { samples: usize, seed: SeedSpec },
}

/// The three calibrated scales and the δ values behind them.
///
/// `infeasible` is set when m − 1 ≤ δ(λ_best), in which case no λ yields a
/// meaningful error bound at this m and the roots are absent. `lambda_min`
/// is also absent (with `infeasible` false) when δ(0) = n ≤ m − 1: the
/// left branch never crosses m − 1.
#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub m: usize,
    pub infeasible: bool,
    pub lambda_best: f64,
    pub delta_best: f64,
    pub lambda_min: Option<f64>,
    pub delta_at_lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub delta_at_lambda_max: Option<f64>,
    /// Golden-section tolerance on λ used for λ_best.
    pub golden_xtol: f64,
    /// Root tolerance on √δ(λ) − √(m−1) used for λ_min/λ_max.
    pub root_ftol: f64,
}

const GOLDEN_XTOL: f64 = 1e-8;
const ROOT_FTOL: f64 = 1e-10;

/// Calibrates λ against the measurement budget: λ_best minimizes δ(λ)
/// (golden section on the strictly convex δ); λ_min and λ_max solve
/// δ(λ) = m − 1 on [0, λ_best] and [λ_best, ∞) by bisection on
/// √δ(λ) − √(m−1).
pub fn calibrate(
    geometry: &SubdiffGeometry,
    m: usize,
    method: CalibrationMethod,
) -> Result<CalibrationReport> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "at least two measurements are required, got m={m}"
        )));
    }
    let eval: Box<dyn Fn(f64) -> f64> = match method {
        CalibrationMethod::ClosedForm => match geometry.regularizer() {
            Regularizer::L1 => {
                let n = geometry.ambient_dim();
                let k = geometry.structure_size();
                Box::new(move |l: f64| {
                    delta_l1_closed_form(n, k, l).expect("validated arguments")
                })
            }
            Regularizer::Nuclear { .. } => {
                return Err(Error::InvalidArgument(
                    "closed-form calibration is only available for ℓ₁; use Monte Carlo".into(),
                ))
            }
        },
        CalibrationMethod::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidArgument(format!(
                    "need at least 2 samples, got {samples}"
                )));
            }
            // Common random numbers: cache the per-sample scale profiles once
            // and evaluate their mean at any λ.
            let chunks = samples.div_ceil(MC_CHUNK);
            let profiles: Vec<ScaleProfile> = (0..chunks)
                .into_par_iter()
                .flat_map_iter(|c| {
                    let len = MC_CHUNK.min(samples - c * MC_CHUNK);
                    let mut rng = seed.child(c as u64).rng();
                    (0..len)
                        .map(|_| geometry.scale_profile_sampled(&mut rng))
                        .collect::<Vec<_>>()
                })
                .collect();
            let nf = samples as f64;
            Box::new(move |l: f64| profiles.iter().map(|p| p.eval(l)).sum::<f64>() / nf)
        }
    };

    // Bracket λ_best: δ is convex with a positive-λ minimizer, so doubling
    // until the function increases over the half-point closes a bracket.
    let mut hi = 1.0;
    let mut guard = 0;
    while eval(hi) < eval(0.5 * hi) {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::Numerical(
                "δ(λ) still decreasing after 200 doublings; cannot bracket λ_best".into(),
            ));
        }
    }
    let (lambda_best, delta_best) = golden_section_min(&eval, 0.0, hi, GOLDEN_XTOL)?;

    let target = (m - 1) as f64;
    if target <= delta_best {
        return Ok(CalibrationReport {
            m,
            infeasible: true,
            lambda_best,
            delta_best,
            lambda_min: None,
            delta_at_lambda_min: None,
            lambda_max: None,
            delta_at_lambda_max: None,
            golden_xtol: GOLDEN_XTOL,
            root_ftol: ROOT_FTOL,
        });
    }

    let sqrt_target = target.sqrt();
    let g = |l: f64| eval(l).sqrt() - sqrt_target;

    // λ_max: grow the right bracket until √δ exceeds √(m−1); guaranteed
    // since δ(λ) ≥ λ²·(structure size) → ∞.
    let mut right = lambda_best.max(1.0);
    let mut guard = 0;
    while g(right) <= 0.0 {
        right *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::Numerical(
                "δ(λ) never exceeded m−1 on the right branch".into(),
            ));
        }
    }
    let lambda_max = bisect_to_ftol(&g, lambda_best, right)?;
    let delta_at_lambda_max = eval(lambda_max);

    // λ_min: exists only when δ(0) = n exceeds m − 1.
    let n = geometry.ambient_dim();
    let (lambda_min, delta_at_lambda_min) = if n <= m - 1 {
        (None, None)
    } else {
        let root = bisect_to_ftol(&g, 0.0, lambda_best)?;
        let d = eval(root);
        (Some(root), Some(d))
    };

    Ok(CalibrationReport {
        m,
        infeasible: false,
        lambda_best,
        delta_best,
        lambda_min,
        delta_at_lambda_min,
        lambda_max: Some(lambda_max),
        delta_at_lambda_max: Some(delta_at_lambda_max),
        golden_xtol: GOLDEN_XTOL,
        root_ftol: ROOT_FTOL,
    })
}

/// Bisection that terminates on |g(mid)| ≤ ROOT_FTOL (falling back to the
/// bracket collapsing to machine resolution).
fn bisect_to_ftol<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Result<f64> {
    let glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() {
        return Err(Error::Precondition(format!(
            "no sign change on [{lo}, {hi}]: g(lo) = {glo:e}, g(hi) = {ghi:e}"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = glo;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = g(mid);
        if fm.abs() <= ROOT_FTOL {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // The function tolerance was not reached but the bracket is as tight as
    // 300 halvings allow; fall back to bisect_root's midpoint contract.
    bisect_root(g, lo, hi, f64::EPSILON)
}
