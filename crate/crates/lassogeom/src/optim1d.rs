//! One-dimensional minimization and root finding used by the calibration
//! routines. Both methods are derivative-free because the objectives they
//! serve (expected squared distances and their Monte Carlo estimates) are
//! cheap to evaluate but not smooth enough to trust finite differences.

use crate::{Error, Result};

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Shrinks the bracket by the inverse golden ratio per step and returns the
/// midpoint of the final bracket together with the function value there.
/// `xtol` is the absolute width at which the bracket is considered resolved.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
) -> Result<(f64, f64)> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidArgument(format!(
            "golden-section bracket must be finite with a < b, got [{a}, {b}]"
        )));
    }
    if !(xtol > 0.0) {
        return Err(Error::InvalidArgument(format!("xtol must be positive, got {xtol}")));
    }
    const INVPHI: f64 = 0.618_033_988_749_894_8; // (√5 − 1) / 2
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // Each iteration multiplies the width by INVPHI, so the iteration count
    // is bounded by log(width/xtol)/log(1/INVPHI); 400 covers any f64 range.
    for _ in 0..400 {
        if hi - lo <= xtol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // Return the best point actually seen, not necessarily the midpoint.
    if f1 < fx && f1 <= f2 {
        Ok((x1, f1))
    } else if f2 < fx {
        Ok((x2, f2))
    } else {
        Ok((x, fx))
    }
}

/// Bisection for a root of `f` on `[a, b]`, which must bracket a sign change.
///
/// Stops when the bracket width falls below `xtol` and returns its midpoint.
pub fn bisect_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidArgument(format!(
            "bisection bracket must be finite with a < b, got [{a}, {b}]"
        )));
    }
    if !(xtol > 0.0) {
        return Err(Error::InvalidArgument(format!("xtol must be positive, got {xtol}")));
    }
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Precondition(format!(
            "no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}"
        )));
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            lo = mid;
            fa = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_smooth_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 2.37).powi(2) + 1.0, 0.0, 10.0, 1e-9).unwrap();
        assert_abs_diff_eq!(x, 2.37, epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn golden_handles_nonsmooth_unimodal() {
        let (x, fx) = golden_section_min(|x| (x - 1.0).abs() + 0.5, -4.0, 6.0, 1e-10).unwrap();
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(fx, 0.5, epsilon = 1e-8);
    }

    #[test]
    fn golden_monotone_returns_endpoint_region() {
        // Monotone increasing on the bracket: the minimum is at the left end.
        let (x, _) = golden_section_min(|x| x, 3.0, 8.0, 1e-9).unwrap();
        assert_abs_diff_eq!(x, 3.0, epsilon = 1e-6);
    }

    #[test]
    fn golden_rejects_bad_bracket() {
        assert!(golden_section_min(|x| x, 2.0, 1.0, 1e-6).is_err());
        assert!(golden_section_min(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn bisect_finds_cosine_root() {
        let root = bisect_root(|x| x.cos(), 0.0, 3.0, 1e-12).unwrap();
        assert_abs_diff_eq!(root, std::f64::consts::FRAC_PI_2, epsilon = 1e-11);
    }

    #[test]
    fn bisect_exact_endpoint_root() {
        assert_eq!(bisect_root(|x| x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn bisect_requires_sign_change() {
        let err = bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn bisect_tiny_tolerance_terminates() {
        // xtol below ulp: the midpoint degeneracy check must stop the loop.
        let root = bisect_root(|x| x - 0.1, 0.0, 1.0, 1e-300).unwrap();
        assert_abs_diff_eq!(root, 0.1, epsilon = 1e-15);
    }
}
