//! Dense linear-algebra kernels: a one-sided Jacobi SVD for the small
//! matrices handled by the spectral regularizer, and a power-iteration
//! spectral-norm estimate for solver step sizes.
//!
//! The Jacobi method is quadratically convergent once columns are nearly
//! orthogonal and is reliably accurate at the sizes used here (≤ 64×64),
//! which keeps the crate free of BLAS/LAPACK bindings.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::rng::CounterRng;

/// Thin singular value decomposition `A = U · diag(σ) · Vᵀ`.
///
/// `u` is m×k and `vt` is k×n with k = min(m, n); `sigma` is sorted in
/// descending order. Columns of `u` whose singular value is numerically zero
/// are zero vectors (they carry no information and are never used downstream).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Array2<f64>,
    pub sigma: Array1<f64>,
    pub vt: Array2<f64>,
}

impl Svd {
    /// Reconstructs `U · diag(σ) · Vᵀ`.
    pub fn reconstruct(&self) -> Array2<f64> {
        let scaled = &self.u * &self.sigma.view().insert_axis(Axis(0));
        scaled.dot(&self.vt)
    }
}

/// One-sided Jacobi SVD. Accurate to ~1e−14·σ_max for well-scaled inputs.
pub fn jacobi_svd(a: &ArrayView2<f64>) -> Svd {
    let (m, n) = a.dim();
    if m < n {
        // Work on the transpose and swap the factors back.
        let t = jacobi_svd(&a.t());
        return Svd {
            u: t.vt.t().to_owned(),
            sigma: t.sigma,
            vt: t.u.t().to_owned(),
        };
    }
    let k = n;
    let mut b = a.to_owned();
    let mut v = Array2::<f64>::eye(n);

    // Sweep column pairs, rotating each pair until all are orthogonal.
    for _sweep in 0..64 {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for r in 0..m {
                    let bi = b[[r, i]];
                    let bj = b[[r, j]];
                    alpha += bi * bi;
                    beta += bj * bj;
                    gamma += bi * bj;
                }
                if gamma * gamma <= 1e-60 * alpha * beta || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let bi = b[[r, i]];
                    let bj = b[[r, j]];
                    b[[r, i]] = c * bi - s * bj;
                    b[[r, j]] = s * bi + c * bj;
                }
                for r in 0..n {
                    let vi = v[[r, i]];
                    let vj = v[[r, j]];
                    v[[r, i]] = c * vi - s * vj;
                    v[[r, j]] = s * vi + c * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..k)
        .map(|c| b.column(c).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    let cutoff = sigma_max * 1e-300_f64.max(f64::EPSILON * m as f64);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).unwrap());

    let mut u = Array2::<f64>::zeros((m, k));
    let mut vt = Array2::<f64>::zeros((k, n));
    let mut sigma_sorted = Array1::<f64>::zeros(k);
    for (pos, &src) in order.iter().enumerate() {
        let s = sigma[src];
        sigma_sorted[pos] = s;
        if s > cutoff {
            for r in 0..m {
                u[[r, pos]] = b[[r, src]] / s;
            }
        }
        for r in 0..n {
            vt[[pos, r]] = v[[r, src]];
        }
    }
    sigma.clear();

    Svd { u, sigma: sigma_sorted, vt }
}

/// Orthonormal basis for the complement of the column span of `q`, which
/// must itself have orthonormal columns (d×r with r ≤ d). Returns d×(d−r).
///
/// Deterministic: candidate directions are the standard basis vectors, taken
/// in order, orthogonalized twice against everything accepted so far.
pub fn orthonormal_complement(q: &ArrayView2<f64>) -> Array2<f64> {
    let (d, r) = q.dim();
    assert!(r <= d, "complement needs r ≤ d, got {r} > {d}");
    let mut basis: Vec<Array1<f64>> = (0..r).map(|j| q.column(j).to_owned()).collect();
    let mut extra: Vec<Array1<f64>> = Vec::with_capacity(d - r);
    for i in 0..d {
        if extra.len() == d - r {
            break;
        }
        let mut cand = Array1::<f64>::zeros(d);
        cand[i] = 1.0;
        for _pass in 0..2 {
            for b in &basis {
                let proj = b.dot(&cand);
                cand.scaled_add(-proj, b);
            }
        }
        let norm = cand.dot(&cand).sqrt();
        if norm > 1e-8 {
            cand /= norm;
            basis.push(cand.clone());
            extra.push(cand);
        }
    }
    assert_eq!(extra.len(), d - r, "failed to complete orthonormal basis");
    let mut out = Array2::<f64>::zeros((d, d - r));
    for (j, col) in extra.iter().enumerate() {
        out.column_mut(j).assign(col);
    }
    out
}

/// Largest singular value of `a` by power iteration on `AᵀA`.
///
/// Converges from below at rate (σ₂/σ₁)² per step; `rel_tol` on successive
/// estimates decides termination. The start vector comes from `rng`, so the
/// estimate is deterministic given the stream.
pub fn operator_norm(
    a: &ArrayView2<f64>,
    rng: &mut CounterRng,
    rel_tol: f64,
    max_iter: usize,
) -> f64 {
    let (_m, n) = a.dim();
    if n == 0 {
        return 0.0;
    }
    let mut v = Array1::from_shape_fn(n, |_| rng.normal());
    let norm = v.dot(&v).sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    v /= norm;
    let mut sigma = 0.0f64;
    for _ in 0..max_iter {
        let w = a.dot(&v);
        let new_sigma = w.dot(&w).sqrt();
        if new_sigma == 0.0 {
            return 0.0;
        }
        let mut back = a.t().dot(&w);
        let back_norm = back.dot(&back).sqrt();
        if back_norm == 0.0 {
            return new_sigma;
        }
        back /= back_norm;
        let done = (new_sigma - sigma).abs() <= rel_tol * new_sigma;
        sigma = new_sigma;
        v = back;
        if done {
            break;
        }
    }
    sigma
}
