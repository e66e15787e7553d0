//! Bracketed bisection and golden-section extremization.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 400;

/// Bisection on a sign-changing bracket. Stops once the bracket is at most
/// `tol` wide (or an exact zero is hit) and returns its midpoint.
pub fn find_root_bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange {
            a: lo,
            b: hi,
            fa: f_lo,
            fb: f_hi,
        });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Outcome of [`minimize_golden`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    /// False when the seed grid shows more than one local minimum.
    pub unimodal: bool,
}

/// Number of seed intervals used before golden-section refinement.
pub const SEED_GRID: usize = 64;

/// Minimizes `f` on `[a, b]`: a 64-interval seed grid picks the best bracket,
/// golden-section search refines it to `tol`.
pub fn minimize_golden<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Extremum> {
    if !(a < b) {
        return Err(Error::Domain(format!("minimize_golden needs a < b, got [{a}, {b}]")));
    }
    let n = SEED_GRID;
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let best = (0..=n)
        .min_by(|&i, &j| fs[i].total_cmp(&fs[j]))
        .expect("grid is nonempty");
    let local_minima = (0..=n)
        .filter(|&i| {
            let left_ok = i == 0 || fs[i] < fs[i - 1];
            let right_ok = i == n || fs[i] < fs[i + 1];
            left_ok && right_ok
        })
        .count();

    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(n)];
    let (x, value) = golden_section(&f, lo, hi, tol);

    // the refined point can lose to a grid point when the bracket edge is an endpoint
    let (x, value) = if fs[best] < value { (xs[best], fs[best]) } else { (x, value) };
    Ok(Extremum {
        x,
        value,
        unimodal: local_minima <= 1,
    })
}

/// Maximizes `f` on `[a, b]`; see [`minimize_golden`].
pub fn maximize_golden<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Extremum> {
    let m = minimize_golden(|x| -f(x), a, b, tol)?;
    Ok(Extremum {
        value: -m.value,
        ..m
    })
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // compare against both edges so monotone functions land on the endpoint
    [(x, fx), (a, f(a)), (b, f(b))]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("three candidates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn bisect_linear_and_cosine() {
        let x = find_root_bisect(|x| x - 0.5, 0.0, 1.0, 1e-14).unwrap();
        assert_abs_diff_eq!(x, 0.5, epsilon = 1e-14);
        let x = find_root_bisect(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(x, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn bisect_without_sign_change() {
        let err = find_root_bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn bisect_residual_shrinks_with_tol() {
        let f = |x: f64| x.powi(3) - 2.0;
        let mut last = f64::INFINITY;
        for tol in [1e-2, 1e-4, 1e-8, 1e-12] {
            let r = f(find_root_bisect(f, 0.0, 2.0, tol).unwrap()).abs();
            assert!(r <= last * 1.0001 + 1e-15);
            last = r;
        }
        assert!(last < 1e-11);
    }

    #[test]
    fn golden_quadratic() {
        let m = minimize_golden(|x| (x - 1.0).powi(2), 0.0, 3.0, 1e-10).unwrap();
        assert_abs_diff_eq!(m.x, 1.0, epsilon = 1e-8);
        assert!(m.unimodal);
    }

    #[test]
    fn golden_monotone_hits_endpoint() {
        let m = minimize_golden(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(m.x, 0.0);
        let m = maximize_golden(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(m.x, 1.0);
        assert_eq!(m.value, 1.0);
    }

    #[test]
    fn golden_flags_multimodal() {
        let m = minimize_golden(|x| (6.0 * x).cos(), 0.0, 3.0, 1e-10).unwrap();
        assert!(!m.unimodal);
        assert_abs_diff_eq!(m.value, -1.0, epsilon = 1e-12);
    }
}
