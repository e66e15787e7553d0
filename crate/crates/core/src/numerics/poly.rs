//! Small dense polynomials and a companion-matrix quartic solver.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// `x - root`
    pub fn linear_factor(root: f64) -> Self {
        Poly(vec![-root, 1.0])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&0.0) + other.0.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    /// Coefficients `[a4, a3, a2, a1, a0]` of a polynomial of degree at most 4.
    pub fn quartic_coefficients(&self) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (k, &c) in self.0.iter().enumerate().take(5) {
            out[4 - k] = c;
        }
        out
    }
}

/// The four complex roots of a quartic, sorted by ascending real part, then
/// ascending imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticRoots {
    #[serde(serialize_with = "serialize_complex")]
    pub roots: [Complex64; 4],
    /// True when every root has a negligible imaginary part.
    pub all_real: bool,
}

fn serialize_complex<S: serde::Serializer>(
    roots: &[Complex64; 4],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for z in roots {
        seq.serialize_element(&(z.re, z.im))?;
    }
    seq.end()
}

impl QuarticRoots {
    fn from_unsorted(mut roots: [Complex64; 4], imag_tol: f64) -> Self {
        for z in roots.iter_mut() {
            if z.im.abs() <= imag_tol * z.norm().max(1.0) {
                z.im = 0.0;
            }
        }
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let all_real = roots.iter().all(|z| z.im == 0.0);
        Self { roots, all_real }
    }

    /// Real parts when all roots are real.
    pub fn real(&self) -> Option<[f64; 4]> {
        self.all_real.then(|| self.roots.map(|z| z.re))
    }

    /// Real roots (imaginary part cleared by the classifier), ascending.
    pub fn real_roots(&self) -> Vec<f64> {
        self.roots.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect()
    }
}

/// Imaginary parts below this (relative to `max(1, |z|)`) are treated as roundoff.
const IMAG_TOL: f64 = 1e-7;

/// Roots of `a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0` from the eigenvalues of the
/// companion matrix, each polished by one Newton step.
pub fn quartic_roots(coeffs: [f64; 5]) -> Result<QuarticRoots> {
    let [a4, a3, a2, a1, a0] = coeffs;
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if a4 == 0.0 || a4.abs() <= 1e-14 * scale || !a4.is_finite() {
        return Err(Error::Domain(format!(
            "quartic leading coefficient {a4} is zero or negligible"
        )));
    }
    let c = [a0 / a4, a1 / a4, a2 / a4, a3 / a4];
    #[rustfmt::skip]
    let companion = Matrix4::new(
        0.0, 0.0, 0.0, -c[0],
        1.0, 0.0, 0.0, -c[1],
        0.0, 1.0, 0.0, -c[2],
        0.0, 0.0, 1.0, -c[3],
    );
    let eig = companion.complex_eigenvalues();
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    for (slot, z) in roots.iter_mut().zip(eig.iter()) {
        *slot = newton_polish(&coeffs, *z);
    }
    Ok(QuarticRoots::from_unsorted(roots, IMAG_TOL))
}

fn eval_complex(coeffs: &[f64; 5], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn newton_polish(coeffs: &[f64; 5], z: Complex64) -> Complex64 {
    let (p, dp) = eval_complex(coeffs, z);
    if dp.norm() == 0.0 || !dp.norm().is_finite() {
        return z;
    }
    let candidate = z - p / dp;
    let (p_new, _) = eval_complex(coeffs, candidate);
    // near a multiple root the step can overshoot; keep it only if it helps
    if candidate.re.is_finite() && candidate.im.is_finite() && p_new.norm() <= p.norm() {
        candidate
    } else {
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn expand(roots: [f64; 4]) -> [f64; 5] {
        roots
            .iter()
            .fold(Poly::constant(1.0), |acc, &r| acc.mul(&Poly::linear_factor(r)))
            .quartic_coefficients()
    }

    #[test]
    fn pure_quartic() {
        // a fourfold root is only determined to about eps^(1/4)
        let r = quartic_roots([1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for z in r.roots {
            assert!(z.norm() < 1e-3);
            assert!(z.norm().powi(4) < 1e-12);
        }
    }

    #[test]
    fn constructed_double_root_at_zero() {
        let r = quartic_roots(expand([0.0, 0.0, 2.0, 4.0])).unwrap();
        let real = r.real().expect("all real");
        for (got, want) in real.iter().zip([0.0, 0.0, 2.0, 4.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn complex_pair() {
        // (x^2 + 1)(x - 1)(x - 3)
        let p = Poly(vec![1.0, 0.0, 1.0])
            .mul(&Poly::linear_factor(1.0))
            .mul(&Poly::linear_factor(3.0));
        let r = quartic_roots(p.quartic_coefficients()).unwrap();
        assert!(!r.all_real);
        assert_eq!(r.real_roots().len(), 2);
        assert_abs_diff_eq!(r.roots[0].re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.roots[0].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.roots[1].im, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_degenerate_leading_coefficient() {
        assert!(quartic_roots([0.0, 1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative(), Poly(vec![2.0, 6.0]));
        assert_eq!(p.add(&Poly(vec![1.0])).0, vec![2.0, 2.0, 3.0]);
        assert_eq!(p.degree(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn vieta_round_trip(r in proptest::array::uniform4(-5.0f64..5.0)) {
                let coeffs = expand(r);
                let roots = quartic_roots(coeffs).unwrap();
                // rebuild the monic polynomial from the computed roots
                let rebuilt = roots.roots.iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, z| {
                    let mut out = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
                    for (k, c) in acc.iter().enumerate() {
                        out[k + 1] += *c;
                        out[k] -= *c * z;
                    }
                    out
                });
                let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
                for k in 0..5 {
                    let want = coeffs[4 - k];
                    prop_assert!((rebuilt[k].re - want).abs() <= 1e-9 * scale);
                    prop_assert!(rebuilt[k].im.abs() <= 1e-9 * scale);
                }
            }
        }
    }
}
