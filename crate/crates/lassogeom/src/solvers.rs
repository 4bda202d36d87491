//! First-order solvers for the three estimators, each returning an
//! independently checkable optimality certificate.
//!
//! * norm-residual program `min ‖y−Ax‖ + (λ/√m)f(x)`: primal–dual splitting
//!   on the saddle form `max_{‖a‖≤1} aᵀ(Ax−y) + (λ/√m)f(x)` — both terms are
//!   nonsmooth but both proximal maps are cheap (ball projection, shrinkage);
//! * squared-residual program `min ½‖y−Ax‖² + (τ/√m)f(x)`: monotone
//!   accelerated proximal gradient (objective-guarded with momentum restart);
//! * constrained program `min ‖y−Ax‖ s.t. f(x) ≤ budget`: the same
//!   accelerated scheme on the squared loss with exact ball projection
//!   (minimizing ‖r‖ and ½‖r‖² over a convex set gives the same minimizers).
//!
//! λ = 0 / τ = 0 reduce to least squares and are solved directly by SVD
//! pseudo-inverse, which also yields the minimum-norm solution when the
//! minimizer set is an affine subspace (flagged as non-unique).

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::linalg::{jacobi_svd, operator_norm};
use crate::model::ProblemInstance;
use crate::regularizers::Regularizer;
use crate::rng::SeedSpec;
use crate::{Error, Result};

/// Entries of x̂ at or below this magnitude are treated as off-support when
/// identifying the subdifferential for certificates.
const SUPPORT_ZERO_TOL: f64 = 1e-8;
/// Convergence is re-examined every this many iterations.
const CHECK_WINDOW: usize = 50;

/// Iteration controls shared by all solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub max_iterations: usize,
    /// Relative objective change over a [`CHECK_WINDOW`]-iteration span below
    /// which the optimality certificate is evaluated.
    pub objective_tol: f64,
    /// Certificate residual below which the solve is declared converged.
    pub residual_tol: f64,
    /// Fraction of the step-size stability limit actually used (in (0, 1)).
    pub step_safety: f64,
    /// Record the per-iteration reported-objective trace (for diagnostics;
    /// the trace is non-increasing by construction).
    pub record_trace: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_iterations: 200_000,
            objective_tol: 1e-10,
            residual_tol: 1e-7,
            step_safety: 0.95,
            record_trace: false,
        }
    }
}

impl SolveConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.objective_tol > 0.0) || !(self.residual_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive, got objective_tol={}, residual_tol={}",
                self.objective_tol, self.residual_tol
            )));
        }
        if !(self.step_safety > 0.0 && self.step_safety < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "step_safety must lie in (0, 1), got {}",
                self.step_safety
            )));
        }
        Ok(())
    }
}

/// A solver result: the minimizer, its objective, and the certificate state.
///
/// `certified` is false only when the optimality residual could not be
/// validated independently of the solver run (the zero-residual branch of the
/// norm-residual program, where the reported residual relies on the solver's
/// dual iterate as a witness). `non_unique` marks minimizer sets that are not
/// singletons (least-squares reduction with rank-deficient design); the
/// returned point is then the minimum-norm minimizer.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x_hat: Array1<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub optimality_residual: f64,
    /// r = A·x̂ − y.
    pub residual: Array1<f64>,
    pub converged: bool,
    pub non_unique: bool,
    pub certified: bool,
    /// Dual witness for the norm term (primal–dual solver only): a vector
    /// with ‖u‖ ≤ 1 such that −√m/λ·Aᵀu should lie in ∂f(x̂) at optimality.
    pub dual: Option<Array1<f64>>,
    /// Reported-objective trace, present when requested in the config.
    pub objective_trace: Option<Vec<f64>>,
}

fn l2(v: &Array1<f64>) -> f64 {
    v.dot(v).sqrt()
}

fn check_finite(name: &str, it: impl IntoIterator<Item = f64>) -> Result<()> {
    for v in it {
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "{name} contains a non-finite entry"
            )));
        }
    }
    Ok(())
}

fn validate_instance(inst: &ProblemInstance, f: &Regularizer) -> Result<()> {
    if inst.a.nrows() != inst.m || inst.a.ncols() != inst.n || inst.y.len() != inst.m {
        return Err(Error::DimensionMismatch {
            expected: format!("{}×{} design with {}-vector of measurements", inst.m, inst.n, inst.m),
            got: format!("{:?} design, {}-vector", inst.a.dim(), inst.y.len()),
        });
    }
    f.check_dim(inst.n)?;
    check_finite("design matrix", inst.a.iter().copied())?;
    check_finite("measurements", inst.y.iter().copied())?;
    Ok(())
}

/// Spectral norm of the design, from power iteration with a fixed internal
/// seed so repeated solves are bitwise reproducible.
fn design_norm(inst: &ProblemInstance) -> f64 {
    let mut rng = SeedSpec::new(0x6f70_6e6f_726d, 0).rng();
    operator_norm(&inst.a.view(), &mut rng, 1e-12, 20_000)
}

/// Minimum-norm least-squares solution via SVD pseudo-inverse, with the
/// numerical rank of the design.
fn pinv_least_squares(a: &Array2<f64>, y: &Array1<f64>) -> (Array1<f64>, usize) {
    let svd = jacobi_svd(&a.view());
    let smax = svd.sigma.iter().copied().fold(0.0f64, f64::max);
    let cutoff = smax * 1e-12 * a.nrows().max(a.ncols()) as f64;
    let mut x = Array1::<f64>::zeros(a.ncols());
    let mut rank = 0;
    for (i, &s) in svd.sigma.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let coef = svd.u.column(i).dot(y) / s;
            x.scaled_add(coef, &svd.vt.row(i));
            rank += 1;
        }
    }
    (x, rank)
}

// ---------------------------------------------------------------------------
// Ball projections
// ---------------------------------------------------------------------------

/// Exact Euclidean projection onto the ℓ₁ ball of the given radius, by the
/// sort-and-threshold construction.
pub fn project_l1_ball(v: &ArrayView1<f64>, radius: f64) -> Result<Array1<f64>> {
    if !(radius >= 0.0) {
        return Err(Error::Precondition(format!(
            "ball radius must be nonnegative, got {radius}"
        )));
    }
    if radius == 0.0 {
        return Ok(Array1::zeros(v.len()));
    }
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    if l1 <= radius {
        return Ok(v.to_owned());
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in mags.iter().enumerate() {
        cum += u;
        let t = (cum - radius) / (j + 1) as f64;
        if t < u {
            theta = t;
        } else {
            break;
        }
    }
    Ok(v.mapv(|x| x.signum() * (x.abs() - theta).max(0.0)))
}

/// Exact projection onto `{x : f(x) ≤ radius}`: the ℓ₁ ball directly, the
/// nuclear ball by projecting the singular values onto the ℓ₁ ball.
pub fn project_regularizer_ball(
    f: &Regularizer,
    v: &ArrayView1<f64>,
    radius: f64,
) -> Result<Array1<f64>> {
    f.check_dim(v.len())?;
    match f {
        Regularizer::L1 => project_l1_ball(v, radius),
        Regularizer::Nuclear { d } => {
            if !(radius >= 0.0) {
                return Err(Error::Precondition(format!(
                    "ball radius must be nonnegative, got {radius}"
                )));
            }
            let mat = v.to_owned().into_shape_with_order((*d, *d)).expect("square");
            let svd = jacobi_svd(&mat.view());
            let sp = project_l1_ball(&svd.sigma.view(), radius)?;
            let scaled = &svd.u * &sp.view().insert_axis(Axis(0));
            let back = scaled.dot(&svd.vt);
            Ok(back.into_shape_with_order(d * d).expect("flatten"))
        }
    }
}

// ---------------------------------------------------------------------------
// Optimality certificates (independent of the solver loops)
// ---------------------------------------------------------------------------

/// First-order optimality residual for the norm-residual program, plus a
/// certification flag.
///
/// With ‖r‖ > 0 the condition is `dist(−√m/λ·Aᵀ(r/‖r‖), ∂f(x̂)) ≤ tol` and the
/// residual is certified. With ‖r‖ = 0 the exact condition involves a
/// Minkowski sum over all unit-ball duals; the residual is then evaluated at
/// the provided dual witness (or u = 0 when absent) and flagged uncertified.
pub fn l2_lasso_certificate(
    inst: &ProblemInstance,
    f: &Regularizer,
    lambda: f64,
    x_hat: &ArrayView1<f64>,
    dual_witness: Option<&ArrayView1<f64>>,
) -> Result<(f64, bool)> {
    let r = inst.a.dot(x_hat) - &inst.y;
    let rn = l2(&r);
    let scale = 1.0 + l2(&inst.y);
    let sm = (inst.m as f64).sqrt();
    if lambda == 0.0 {
        if rn <= 1e-12 * scale {
            return Ok((0.0, true));
        }
        let g = inst.a.t().dot(&r) / rn;
        return Ok((l2(&g), true));
    }
    if rn > 1e-10 * scale {
        let v = inst.a.t().dot(&r) * (-sm / (lambda * rn));
        Ok((
            f.dist_to_subdifferential(x_hat, &v.view(), 1.0, SUPPORT_ZERO_TOL)?,
            true,
        ))
    } else {
        let v = match dual_witness {
            Some(u) => inst.a.t().dot(u) * (-sm / lambda),
            None => Array1::zeros(inst.n),
        };
        Ok((
            f.dist_to_subdifferential(x_hat, &v.view(), 1.0, SUPPORT_ZERO_TOL)?,
            false,
        ))
    }
}

/// First-order optimality residual for the squared-residual program:
/// `dist(−√m/τ·Aᵀr, ∂f(x̂))`, or ‖Aᵀr‖ when τ = 0.
pub fn l22_lasso_certificate(
    inst: &ProblemInstance,
    f: &Regularizer,
    tau: f64,
    x_hat: &ArrayView1<f64>,
) -> Result<f64> {
    let r = inst.a.dot(x_hat) - &inst.y;
    if tau == 0.0 {
        return Ok(l2(&inst.a.t().dot(&r)));
    }
    let sm = (inst.m as f64).sqrt();
    let v = inst.a.t().dot(&r) * (-sm / tau);
    f.dist_to_subdifferential(x_hat, &v.view(), 1.0, SUPPORT_ZERO_TOL)
}

/// Certificate for the constrained program: feasibility `f(x̂) ≤ budget+1e−9`
/// and the projected-gradient fixed-point residual
/// `‖x̂ − P(x̂ − s·Aᵀr)‖/s` at the canonical step `s = 1/‖A‖²`.
/// Returns (residual, feasible).
pub fn constrained_certificate(
    inst: &ProblemInstance,
    f: &Regularizer,
    budget: f64,
    x_hat: &ArrayView1<f64>,
) -> Result<(f64, bool)> {
    let feasible = f.value(x_hat)? <= budget + 1e-9;
    let opn = design_norm(inst);
    if opn == 0.0 {
        return Ok((0.0, feasible));
    }
    let s = 1.0 / (opn * opn);
    let r = inst.a.dot(x_hat) - &inst.y;
    let inner = x_hat.to_owned() - inst.a.t().dot(&r) * s;
    let p = project_regularizer_ball(f, &inner.view(), budget)?;
    let resid = l2(&(x_hat.to_owned() - &p)) / s;
    Ok((resid, feasible))
}

// ---------------------------------------------------------------------------
// Norm-residual program (primal–dual splitting)
// ---------------------------------------------------------------------------

/// Minimizes `‖y − Ax‖ + (λ/√m)·f(x)`.
pub fn solve_l2_lasso(
    inst: &ProblemInstance,
    f: &Regularizer,
    lambda: f64,
    cfg: &SolveConfig,
) -> Result<Solution> {
    cfg.validate()?;
    validate_instance(inst, f)?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "regularization scale must be a nonnegative real, got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return least_squares_solution(inst, cfg, |r| l2(r));
    }
    let m = inst.m;
    let n = inst.n;
    let weight = lambda / (m as f64).sqrt();
    let opn = design_norm(inst);
    if opn == 0.0 {
        // Zero design: the fit term is constant, so the regularizer alone
        // decides and its minimum is at the origin.
        let x = Array1::zeros(n);
        let r = -inst.y.clone();
        let (resid, certified) = l2_lasso_certificate(inst, f, lambda, &x.view(), None)?;
        return Ok(Solution {
            objective: l2(&r) + weight * f.value(&x.view())?,
            x_hat: x,
            iterations: 0,
            optimality_residual: resid,
            residual: r,
            converged: resid <= cfg.residual_tol,
            non_unique: false,
            certified,
            dual: None,
            objective_trace: cfg.record_trace.then(|| vec![l2(&inst.y)]),
        });
    }

    let tau = cfg.step_safety / opn;
    let sigma = cfg.step_safety / opn;
    let mut x = Array1::<f64>::zeros(n);
    let mut ax = Array1::<f64>::zeros(m);
    let mut ax_prev = ax.clone();
    let mut dual = Array1::<f64>::zeros(m);

    let mut best_x = x.clone();
    let mut best_obj = l2(&inst.y); // objective at x = 0
    let mut trace = cfg.record_trace.then(Vec::new);
    if let Some(t) = trace.as_mut() {
        t.push(best_obj);
    }
    let obj_floor = 1e-12 * (1.0 + best_obj);
    let mut window_ref = best_obj;
    let mut last_change = f64::INFINITY;
    let mut last_resid = f64::INFINITY;

    for it in 1..=cfg.max_iterations {
        // Dual ascent on the over-relaxed primal image, then unit-ball
        // projection (the saddle form's inner maximizer set).
        let axbar = &ax * 2.0 - &ax_prev;
        dual += &((axbar - &inst.y) * sigma);
        let dn = l2(&dual);
        if dn > 1.0 {
            dual /= dn;
        }
        // Primal proximal descent.
        let grad = inst.a.t().dot(&dual);
        let x_new = f.prox(tau * weight, &(&x - &(grad * tau)).view())?;
        ax_prev = ax;
        ax = inst.a.dot(&x_new);
        x = x_new;

        let obj = l2(&(&ax - &inst.y)) + weight * f.value(&x.view())?;
        if obj < best_obj {
            best_obj = obj;
            best_x.assign(&x);
        }
        if let Some(t) = trace.as_mut() {
            t.push(best_obj);
        }

        if it % CHECK_WINDOW == 0 {
            last_change = (window_ref - best_obj) / best_obj.abs().max(obj_floor);
            window_ref = best_obj;
            if last_change <= cfg.objective_tol {
                let (resid, certified) =
                    l2_lasso_certificate(inst, f, lambda, &best_x.view(), Some(&dual.view()))?;
                last_resid = resid;
                if resid <= cfg.residual_tol {
                    let r = inst.a.dot(&best_x) - &inst.y;
                    return Ok(Solution {
                        objective: l2(&r) + weight * f.value(&best_x.view())?,
                        x_hat: best_x,
                        iterations: it,
                        optimality_residual: resid,
                        residual: r,
                        converged: true,
                        non_unique: false,
                        certified,
                        dual: Some(dual),
                        objective_trace: trace,
                    });
                }
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        objective_change: last_change,
        optimality_residual: last_resid,
    })
}

/// Direct least-squares reduction shared by λ = 0 and τ = 0: minimum-norm
/// solution via pseudo-inverse, flagged non-unique on rank deficiency.
fn least_squares_solution(
    inst: &ProblemInstance,
    cfg: &SolveConfig,
    objective_of_residual: impl Fn(&Array1<f64>) -> f64,
) -> Result<Solution> {
    let (x, rank) = pinv_least_squares(&inst.a, &inst.y);
    let r = inst.a.dot(&x) - &inst.y;
    let rn = l2(&r);
    let resid = if rn <= 1e-12 * (1.0 + l2(&inst.y)) {
        0.0
    } else {
        l2(&inst.a.t().dot(&r)) / rn
    };
    let objective = objective_of_residual(&r);
    Ok(Solution {
        x_hat: x,
        objective,
        iterations: 0,
        optimality_residual: resid,
        residual: r,
        converged: resid <= cfg.residual_tol,
        non_unique: rank < inst.n,
        certified: true,
        dual: None,
        objective_trace: cfg.record_trace.then(|| vec![objective]),
    })
}

// ---------------------------------------------------------------------------
// Squared-residual program (monotone accelerated proximal gradient)
// ---------------------------------------------------------------------------

/// Minimizes `½‖y − Ax‖² + (τ/√m)·f(x)`.
pub fn solve_l22_lasso(
    inst: &ProblemInstance,
    f: &Regularizer,
    tau: f64,
    cfg: &SolveConfig,
) -> Result<Solution> {
    cfg.validate()?;
    validate_instance(inst, f)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "regularization scale must be a nonnegative real, got {tau}"
        )));
    }
    if tau == 0.0 {
        return least_squares_solution(inst, cfg, |r| 0.5 * r.dot(r));
    }
    let weight = tau / (inst.m as f64).sqrt();
    let mapping =
        move |f: &Regularizer, v: &ArrayView1<f64>, step: f64| f.prox(step * weight, v);
    let smooth = accelerated_descent(
        inst,
        f,
        cfg,
        &mapping,
        move |f: &Regularizer, x: &ArrayView1<f64>| f.value(x).map(|fv| weight * fv),
        |inst, f, x| l22_lasso_certificate(inst, f, tau, x),
    )?;
    Ok(smooth)
}

/// Minimizes `‖y − Ax‖` subject to `f(x) ≤ budget`, by accelerated projected
/// gradient on the squared loss (same minimizer set over a convex set).
/// The reported objective is the constrained program's own, `‖y − A x̂‖`.
pub fn solve_constrained(
    inst: &ProblemInstance,
    f: &Regularizer,
    budget: f64,
    cfg: &SolveConfig,
) -> Result<Solution> {
    cfg.validate()?;
    validate_instance(inst, f)?;
    if !(budget >= 0.0) {
        return Err(Error::Precondition(format!(
            "constraint budget must be nonnegative, got {budget}"
        )));
    }
    let mapping = move |f: &Regularizer, v: &ArrayView1<f64>, _step: f64| {
        project_regularizer_ball(f, v, budget)
    };
    let mut sol = accelerated_descent(
        inst,
        f,
        cfg,
        &mapping,
        |_f: &Regularizer, _x: &ArrayView1<f64>| Ok(0.0),
        |inst, f, x| constrained_certificate(inst, f, budget, x).map(|(r, _feas)| r),
    )?;
    // Re-express in the constrained program's objective.
    sol.objective = l2(&sol.residual);
    let (_, feasible) = constrained_certificate(inst, f, budget, &sol.x_hat.view())?;
    sol.converged = sol.converged && feasible;
    sol.certified = feasible;
    Ok(sol)
}

/// Shared monotone accelerated scheme on `½‖Ax−y‖² + penalty(x)` where the
/// backward step is `mapping` (prox or ball projection). The objective trace
/// is non-increasing: candidate steps that would increase it are replaced by
/// a plain forward–backward step and the momentum is restarted.
fn accelerated_descent(
    inst: &ProblemInstance,
    f: &Regularizer,
    cfg: &SolveConfig,
    mapping: &dyn Fn(&Regularizer, &ArrayView1<f64>, f64) -> Result<Array1<f64>>,
    penalty: impl Fn(&Regularizer, &ArrayView1<f64>) -> Result<f64>,
    certificate: impl Fn(&ProblemInstance, &Regularizer, &ArrayView1<f64>) -> Result<f64>,
) -> Result<Solution> {
    let n = inst.n;
    let opn = design_norm(inst);
    let start = mapping(f, &Array1::zeros(n).view(), 1.0)?;
    if opn == 0.0 {
        let r = inst.a.dot(&start) - &inst.y;
        let resid = certificate(inst, f, &start.view())?;
        let objective = 0.5 * r.dot(&r) + penalty(f, &start.view())?;
        return Ok(Solution {
            x_hat: start,
            objective,
            iterations: 0,
            optimality_residual: resid,
            residual: r,
            converged: resid <= cfg.residual_tol,
            non_unique: false,
            certified: true,
            dual: None,
            objective_trace: cfg.record_trace.then(|| vec![objective]),
        });
    }
    let step = cfg.step_safety / (opn * opn);

    // Start from the mapped origin so the iterate is always feasible for the
    // constrained variant.
    let mut x = start;
    let mut x_prev = x.clone();
    let mut ax = inst.a.dot(&x);
    let mut ax_prev = ax.clone();
    let mut theta: f64 = 1.0;
    let mut obj_cur = {
        let r = &ax - &inst.y;
        0.5 * r.dot(&r) + penalty(f, &x.view())?
    };
    let mut trace = cfg.record_trace.then(Vec::new);
    if let Some(t) = trace.as_mut() {
        t.push(obj_cur);
    }
    let obj_floor = 1e-12 * (1.0 + obj_cur);
    let mut window_ref = obj_cur;
    let mut last_change = f64::INFINITY;
    let mut last_resid = f64::INFINITY;

    for it in 1..=cfg.max_iterations {
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / theta_next;
        let v = &x + &((&x - &x_prev) * beta);
        let av = &ax + &((&ax - &ax_prev) * beta);
        let grad = inst.a.t().dot(&(av - &inst.y));
        let cand = mapping(f, &(&v - &(grad * step)).view(), step)?;
        let a_cand = inst.a.dot(&cand);
        let r_cand = &a_cand - &inst.y;
        let obj_cand = 0.5 * r_cand.dot(&r_cand) + penalty(f, &cand.view())?;

        if obj_cand <= obj_cur {
            x_prev = x;
            x = cand;
            ax_prev = ax;
            ax = a_cand;
            theta = theta_next;
            obj_cur = obj_cand;
        } else {
            // Momentum overshoot: fall back to a plain forward–backward step
            // from x (non-increasing for any step within the stability limit)
            // and restart the momentum sequence.
            let grad_x = inst.a.t().dot(&(&ax - &inst.y));
            let cand2 = mapping(f, &(&x - &(grad_x * step)).view(), step)?;
            let a_cand2 = inst.a.dot(&cand2);
            let r2 = &a_cand2 - &inst.y;
            let obj2 = 0.5 * r2.dot(&r2) + penalty(f, &cand2.view())?;
            if obj2 <= obj_cur {
                x_prev = x.clone();
                x = cand2;
                ax_prev = ax.clone();
                ax = a_cand2;
                obj_cur = obj2;
            } else {
                x_prev = x.clone();
                ax_prev = ax.clone();
            }
            theta = 1.0;
        }
        if let Some(t) = trace.as_mut() {
            t.push(obj_cur);
        }

        if it % CHECK_WINDOW == 0 {
            last_change = (window_ref - obj_cur) / obj_cur.abs().max(obj_floor);
            window_ref = obj_cur;
            if last_change <= cfg.objective_tol {
                let resid = certificate(inst, f, &x.view())?;
                last_resid = resid;
                if resid <= cfg.residual_tol {
                    let r = &ax - &inst.y;
                    return Ok(Solution {
                        objective: 0.5 * r.dot(&r) + penalty(f, &x.view())?,
                        residual: r.clone(),
                        x_hat: x,
                        iterations: it,
                        optimality_residual: resid,
                        converged: true,
                        non_unique: false,
                        certified: true,
                        dual: None,
                        objective_trace: trace,
                    });
                }
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        objective_change: last_change,
        optimality_residual: last_resid,
    })
}

// ---------------------------------------------------------------------------
// Proximal denoising and the error-vector objective
// ---------------------------------------------------------------------------

/// Solves `min_x ½‖y − x‖² + λσ·f(x)` exactly: the proximal map of f with
/// weight λσ at y.
pub fn proximal_denoise(
    f: &Regularizer,
    lambda: f64,
    sigma: f64,
    y: &ArrayView1<f64>,
) -> Result<Array1<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise level must be positive, got {sigma}"
        )));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "regularization scale must be nonnegative, got {lambda}"
        )));
    }
    f.prox(lambda * sigma, y)
}

/// The norm-residual objective re-centred at the true signal, as a function
/// of the error vector w = x − x₀:
/// `‖Aw − z‖ + (λ/√m)(f(x₀ + w) − f(x₀))`.
/// At w = 0 this equals ‖z‖ exactly, and it reproduces the program objective
/// at x = x₀ + w up to the constant (λ/√m)·f(x₀).
pub fn error_vector_objective(
    inst: &ProblemInstance,
    f: &Regularizer,
    lambda: f64,
    w: &ArrayView1<f64>,
) -> Result<f64> {
    if w.len() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: format!("{}", inst.n),
            got: format!("{}", w.len()),
        });
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "regularization scale must be a nonnegative real, got {lambda}"
        )));
    }
    let weight = lambda / (inst.m as f64).sqrt();
    if w.iter().all(|&v| v == 0.0) {
        // Exact feasibility of the zero error vector: value is ‖z‖ with no
        // arithmetic beyond the norm itself.
        return Ok(l2(&inst.z));
    }
    let fit = l2(&(inst.a.dot(w) - &inst.z));
    let shifted = &inst.x0 + w;
    Ok(fit + weight * (f.value(&shifted.view())? - f.value(&inst.x0.view())?))
}
