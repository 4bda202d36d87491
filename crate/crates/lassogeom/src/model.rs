//! Problem data: structured signals, measurement instances, noise families.
//!
//! Everything here is generated deterministically from a [`SeedSpec`], with
//! independent substreams for the measurement matrix and the noise vector, so
//! instances are bitwise reproducible no matter how trials are scheduled.

use ndarray::{Array1, Array2, Axis};

use crate::rng::{CounterRng, SeedSpec};
use crate::{Error, Result};

/// A structured signal x₀: either k-sparse in the coordinate basis or a
/// low-rank d×d matrix stored in row-major vector form (n = d²).
#[derive(Debug, Clone)]
pub enum SignalModel {
    Sparse {
        n: usize,
        /// Support indices, strictly increasing, each in [0, n).
        support: Vec<usize>,
        /// Nonzero values on the support, aligned with `support`.
        values: Vec<f64>,
    },
    LowRank {
        d: usize,
        /// Left/right orthonormal factors, d×r.
        u: Array2<f64>,
        v: Array2<f64>,
        /// Strictly positive singular values, descending, length r.
        singular_values: Vec<f64>,
    },
}

impl SignalModel {
    /// Ambient dimension n (d² for low-rank).
    pub fn dim(&self) -> usize {
        match self {
            SignalModel::Sparse { n, .. } => *n,
            SignalModel::LowRank { d, .. } => d * d,
        }
    }

    /// Number of structural degrees: sparsity k, or rank r.
    pub fn structure_size(&self) -> usize {
        match self {
            SignalModel::Sparse { support, .. } => support.len(),
            SignalModel::LowRank { singular_values, .. } => singular_values.len(),
        }
    }

    /// Materializes x₀ as a dense vector (row-major for the matrix case).
    pub fn dense(&self) -> Array1<f64> {
        match self {
            SignalModel::Sparse { n, support, values } => {
                let mut x = Array1::zeros(*n);
                for (&i, &v) in support.iter().zip(values) {
                    x[i] = v;
                }
                x
            }
            SignalModel::LowRank { d, u, v, singular_values } => {
                let s = Array1::from_vec(singular_values.clone());
                let scaled = u * &s.view().insert_axis(Axis(0));
                let mat = scaled.dot(&v.t());
                Array1::from_iter(mat.iter().copied()).into_shape_with_order(*d * *d).unwrap()
            }
        }
    }

    /// Checks the structural invariants; generators call this before
    /// returning and deserialized models should be checked the same way.
    pub fn validate(&self) -> Result<()> {
        match self {
            SignalModel::Sparse { n, support, values } => {
                let k = support.len();
                if k == 0 || k > *n {
                    return Err(Error::InvalidArgument(format!(
                        "sparse signal needs 1 ≤ k ≤ n, got k={k}, n={n}"
                    )));
                }
                if values.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{k} support values"),
                        got: format!("{}", values.len()),
                    });
                }
                if support.windows(2).any(|w| w[0] >= w[1]) || support.iter().any(|&i| i >= *n) {
                    return Err(Error::InvalidArgument(
                        "support indices must be strictly increasing and in [0, n)".into(),
                    ));
                }
                if values.iter().any(|&v| v == 0.0 || !v.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "support values must be finite and nonzero".into(),
                    ));
                }
            }
            SignalModel::LowRank { d, u, v, singular_values } => {
                let r = singular_values.len();
                if r == 0 || r > *d {
                    return Err(Error::InvalidArgument(format!(
                        "low-rank signal needs 1 ≤ r ≤ d, got r={r}, d={d}"
                    )));
                }
                if u.dim() != (*d, r) || v.dim() != (*d, r) {
                    return Err(Error::DimensionMismatch {
                        expected: format!("factors of shape {d}x{r}"),
                        got: format!("{:?} and {:?}", u.dim(), v.dim()),
                    });
                }
                if singular_values.iter().any(|&s| !(s > 0.0)) {
                    return Err(Error::InvalidArgument(
                        "singular values must be strictly positive".into(),
                    ));
                }
                for (name, f) in [("U", u), ("V", v)] {
                    let gram = f.t().dot(f);
                    for i in 0..r {
                        for j in 0..r {
                            let want = if i == j { 1.0 } else { 0.0 };
                            if (gram[[i, j]] - want).abs() > 1e-10 {
                                return Err(Error::Numerical(format!(
                                    "{name} columns not orthonormal: gram[{i},{j}] = {}",
                                    gram[[i, j]]
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Noise distribution for z, always sampled independently of A.
#[derive(Debug, Clone)]
pub enum NoiseSpec {
    /// i.i.d. N(0, σ²).
    Gaussian { sigma: f64 },
    /// i.i.d. scale · t_ν (Student's t with integer degrees of freedom).
    StudentT { nu: u32, scale: f64 },
    /// i.i.d. uniform on [−a, a].
    Uniform { a: f64 },
    /// A fixed deterministic vector (must have length m).
    Fixed { z: Vec<f64> },
}

impl NoiseSpec {
    fn validate(&self, m: usize) -> Result<()> {
        match self {
            NoiseSpec::Gaussian { sigma } if !(*sigma > 0.0) => Err(Error::InvalidArgument(
                format!("gaussian noise needs σ > 0, got {sigma}"),
            )),
            NoiseSpec::StudentT { nu, scale } if *nu < 1 || !(*scale > 0.0) => {
                Err(Error::InvalidArgument(format!(
                    "student-t noise needs ν ≥ 1 and scale > 0, got ν={nu}, scale={scale}"
                )))
            }
            NoiseSpec::Uniform { a } if !(*a > 0.0) => Err(Error::InvalidArgument(format!(
                "uniform noise needs a > 0, got {a}"
            ))),
            NoiseSpec::Fixed { z } if z.len() != m => Err(Error::DimensionMismatch {
                expected: format!("fixed noise of length {m}"),
                got: format!("{}", z.len()),
            }),
            _ => Ok(()),
        }
    }

    /// Draws z of length m from this family.
    pub fn sample(&self, m: usize, rng: &mut CounterRng) -> Result<Array1<f64>> {
        self.validate(m)?;
        Ok(match self {
            NoiseSpec::Gaussian { sigma } => {
                Array1::from_shape_fn(m, |_| *sigma * rng.normal())
            }
            NoiseSpec::StudentT { nu, scale } => Array1::from_shape_fn(m, |_| {
                // t_ν = Z / sqrt(χ²_ν / ν) with the χ² built from ν squared
                // normals: every draw comes off the same normal stream.
                let z = rng.normal();
                let chi2: f64 = (0..*nu).map(|_| rng.normal().powi(2)).sum();
                *scale * z / (chi2 / f64::from(*nu)).sqrt()
            }),
            NoiseSpec::Uniform { a } => {
                Array1::from_shape_fn(m, |_| *a * (2.0 * rng.uniform() - 1.0))
            }
            NoiseSpec::Fixed { z } => Array1::from_vec(z.clone()),
        })
    }
}

/// One realized inverse problem: y = A·x₀ + z with A of shape m×n.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub m: usize,
    pub n: usize,
    pub a: Array2<f64>,
    pub x0: Array1<f64>,
    pub z: Array1<f64>,
    pub y: Array1<f64>,
}

/// Generates a k-sparse signal: support uniform without replacement, values
/// i.i.d. Gaussian on the support, then normalized to unit ℓ₂ norm.
pub fn generate_sparse_signal(n: usize, k: usize, seed: SeedSpec) -> Result<SignalModel> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "sparse signal needs 1 ≤ k ≤ n, got k={k}, n={n}"
        )));
    }
    let mut rng = seed.rng();
    // Floyd's algorithm: k distinct indices uniform over [0, n).
    let mut chosen = std::collections::HashSet::with_capacity(k);
    let mut support = Vec::with_capacity(k);
    for j in (n - k)..n {
        let t = (rng.next_u64_public() % (j as u64 + 1)) as usize;
        if chosen.insert(t) {
            support.push(t);
        } else {
            chosen.insert(j);
            support.push(j);
        }
    }
    support.sort_unstable();

    let mut values: Vec<f64> = (0..k).map(|_| rng.normal()).collect();
    let norm: f64 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    // A zero norm needs all k normals to be exactly 0.0 — not reachable in
    // practice, but regenerate rather than divide by zero.
    if norm == 0.0 {
        return generate_sparse_signal(n, k, seed.child(u64::MAX));
    }
    for v in &mut values {
        *v /= norm;
    }
    let model = SignalModel::Sparse { n, support, values };
    model.validate()?;
    Ok(model)
}

/// Generates a rank-r d×d signal: U, V from orthonormalized Gaussian
/// matrices, singular values i.i.d. positive, Frobenius-normalized so
/// ‖X₀‖_F = 1, sorted descending.
pub fn generate_lowrank_signal(d: usize, r: usize, seed: SeedSpec) -> Result<SignalModel> {
    if r == 0 || r > d {
        return Err(Error::InvalidArgument(format!(
            "low-rank signal needs 1 ≤ r ≤ d, got r={r}, d={d}"
        )));
    }
    let mut rng = seed.rng();
    let u = random_orthonormal(d, r, &mut rng);
    let v = random_orthonormal(d, r, &mut rng);
    let mut sv: Vec<f64> = (0..r).map(|_| rng.normal().abs().max(1e-3)).collect();
    let fro: f64 = sv.iter().map(|s| s * s).sum::<f64>().sqrt();
    for s in &mut sv {
        *s /= fro;
    }
    // Sort singular values descending, permuting factor columns to match.
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap());
    let sv_sorted: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
    let u_sorted = reorder_columns(&u, &order);
    let v_sorted = reorder_columns(&v, &order);
    let model = SignalModel::LowRank {
        d,
        u: u_sorted,
        v: v_sorted,
        singular_values: sv_sorted,
    };
    model.validate()?;
    Ok(model)
}

fn reorder_columns(a: &Array2<f64>, order: &[usize]) -> Array2<f64> {
    let (rows, _) = a.dim();
    Array2::from_shape_fn((rows, order.len()), |(i, j)| a[[i, order[j]]])
}

/// Modified Gram–Schmidt with re-orthogonalization on a d×r Gaussian draw.
fn random_orthonormal(d: usize, r: usize, rng: &mut CounterRng) -> Array2<f64> {
    let mut q = Array2::from_shape_fn((d, r), |_| rng.normal());
    for _pass in 0..2 {
        for j in 0..r {
            for i in 0..j {
                let proj = q.column(i).dot(&q.column(j));
                let qi = q.column(i).to_owned();
                q.column_mut(j).scaled_add(-proj, &qi);
            }
            let norm = q.column(j).dot(&q.column(j)).sqrt();
            if norm < 1e-12 {
                // Degenerate draw (probability ~0): replace and redo.
                for x in q.column_mut(j).iter_mut() {
                    *x = rng.normal();
                }
                continue;
            }
            q.column_mut(j).mapv_inplace(|x| x / norm);
        }
    }
    q
}

/// Generates a full instance: A with i.i.d. N(0, 1/m) entries from one
/// substream, z from the noise family on an independent substream, and
/// y = A·x₀ + z.
pub fn generate_instance(
    signal: &SignalModel,
    m: usize,
    noise: &NoiseSpec,
    seed: SeedSpec,
) -> Result<ProblemInstance> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "at least two measurements are required, got m={m}"
        )));
    }
    signal.validate()?;
    let n = signal.dim();
    let scale = 1.0 / (m as f64).sqrt();
    let mut a_rng = seed.child(0).rng();
    let a = Array2::from_shape_fn((m, n), |_| scale * a_rng.normal());
    let mut z_rng = seed.child(1).rng();
    let z = noise.sample(m, &mut z_rng)?;
    let x0 = signal.dense();
    let y = a.dot(&x0) + &z;
    Ok(ProblemInstance { m, n, a, x0, z, y })
}

/// An i.i.d. standard normal vector, deterministic per seed.
pub fn sample_standard_gaussian(dim: usize, seed: SeedSpec) -> Result<Array1<f64>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mut rng = seed.rng();
    Ok(Array1::from_shape_fn(dim, |_| rng.normal()))
}

impl CounterRng {
    /// Raw word output without importing the RngCore trait at call sites.
    #[inline]
    pub(crate) fn next_u64_public(&mut self) -> u64 {
        rand::RngCore::next_u64(self)
    }
}
