//! One-degree-of-freedom reductions at the singular points `N x S` and `S x N`.
//!
//! Everything here is in `R1`-scaled units. On the reduced space the
//! Hamiltonian reads `A_l(p2) + sqrt(B_l(p2)) cos q2`, where `l` is the level
//! of `L / R1` shifted so that the singular point sits at `l = 0`, and `p2`
//! runs over the physical interval where `B_l >= 0`.
//!
//! The `S x N` chart uses reflected coordinates so that its physical interval
//! also starts at `p2 = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhasePoint};
use crate::numerics::{quartic_roots, Poly, QuarticRoots};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SingLabel {
    NS,
    SN,
}

impl SingLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SingLabel::NS => "NS",
            SingLabel::SN => "SN",
        }
    }

    /// `+1` for `N x S`, `-1` for `S x N`.
    fn sign(self) -> f64 {
        match self {
            SingLabel::NS => 1.0,
            SingLabel::SN => -1.0,
        }
    }
}

/// Value of `H` at the singular point: `+-(1 - 2 s1)(1 - 2 s2)`.
pub fn critical_value(label: SingLabel, params: &ModelParams) -> f64 {
    label.sign() * (1.0 - 2.0 * params.s1()) * (1.0 - 2.0 * params.s2())
}

/// `L / R1` on the reduced level `l`.
pub fn scaled_level(label: SingLabel, l: f64, params: &ModelParams) -> f64 {
    let r = params.ratio();
    match label {
        SingLabel::NS => l + 1.0 - r,
        SingLabel::SN => l + r - 1.0,
    }
}

/// Inverse of [`scaled_level`]: the reduced level of the unscaled value `L`.
pub fn reduced_level(label: SingLabel, l_unscaled: f64, params: &ModelParams) -> f64 {
    let r = params.ratio();
    let x = l_unscaled / params.r1();
    match label {
        SingLabel::NS => x - 1.0 + r,
        SingLabel::SN => x - r + 1.0,
    }
}

/// Coefficients `(a0, a1)` of `A_l(p2) = a0 + a1 p2`.
fn a_coefficients(label: SingLabel, l: f64, params: &ModelParams) -> (f64, f64) {
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    let k = 1.0 - 2.0 * s1;
    match label {
        SingLabel::NS => (
            k * (1.0 + l - 2.0 * s2 - l * s2),
            k * (s2 - r + r * s2) / r,
        ),
        SingLabel::SN => (
            k * (-1.0 + l + 2.0 * s2 - l * s2),
            k * (r - s2 - r * s2) / r,
        ),
    }
}

pub fn reduced_a(label: SingLabel, l: f64, p2: f64, params: &ModelParams) -> f64 {
    let (a0, a1) = a_coefficients(label, l, params);
    a0 + a1 * p2
}

/// The four linear factors of `B_l` are `p2`, `p2 - m`, `p2 - 2R`, `p2 - m - 2`
/// with `m = l` for `N x S` and `m = -l` for `S x N`.
fn b_shift(label: SingLabel, l: f64) -> f64 {
    label.sign() * l
}

fn b_prefactor(params: &ModelParams) -> f64 {
    let c = params.coupling();
    let r = params.ratio();
    4.0 * c * c / (r * r)
}

pub fn reduced_b(label: SingLabel, l: f64, p2: f64, params: &ModelParams) -> f64 {
    let m = b_shift(label, l);
    let r = params.ratio();
    b_prefactor(params) * p2 * (p2 - m) * (p2 - 2.0 * r) * (p2 - m - 2.0)
}

/// Reduced Hamiltonian `A + sqrt(B) cos q2`; `B` is clamped at zero.
pub fn reduced_h(label: SingLabel, l: f64, q2: f64, p2: f64, params: &ModelParams) -> f64 {
    reduced_a(label, l, p2, params) + reduced_b(label, l, p2, params).max(0.0).sqrt() * q2.cos()
}

/// Range of reduced levels: `[-2, 2R]` for `N x S`, `[-2R, 2]` for `S x N`.
pub fn level_range(label: SingLabel, r: f64) -> (f64, f64) {
    match label {
        SingLabel::NS => (-2.0, 2.0 * r),
        SingLabel::SN => (-2.0 * r, 2.0),
    }
}

/// Interval of `p2` where `B_l(p2) >= 0` inside `0 <= p2 <= 2R`.
pub fn physical_interval(label: SingLabel, l: f64, r: f64) -> Result<(f64, f64)> {
    let (lo, hi) = level_range(label, r);
    let slack = 1e-12 * (1.0 + r);
    if !(l >= lo - slack && l <= hi + slack) {
        return Err(Error::Domain(format!(
            "level l = {l} is outside [{lo}, {hi}] for {}",
            label.as_str()
        )));
    }
    let m = b_shift(label, l.clamp(lo, hi));
    let a = 0.0f64.max(m);
    let b = (2.0 * r).min(m + 2.0);
    Ok((a, b.max(a)))
}

/// `B_l` as a polynomial in `p2`.
pub fn poly_b(label: SingLabel, l: f64, params: &ModelParams) -> Poly {
    let m = b_shift(label, l);
    let r = params.ratio();
    Poly(vec![0.0, 1.0])
        .mul(&Poly::linear_factor(m))
        .mul(&Poly::linear_factor(2.0 * r))
        .mul(&Poly::linear_factor(m + 2.0))
        .scale(b_prefactor(params))
}

/// `P_l(p2) = B_l(p2) - (h + H_crit - A_l(p2))^2` as a polynomial in `p2`.
pub fn poly_p_coefficients(label: SingLabel, l: f64, h: f64, params: &ModelParams) -> Poly {
    let (a0, a1) = a_coefficients(label, l, params);
    let inner = Poly(vec![h + critical_value(label, params) - a0, -a1]);
    poly_b(label, l, params).add(&inner.mul(&inner).scale(-1.0))
}

pub fn poly_p(label: SingLabel, l: f64, h: f64, p2: f64, params: &ModelParams) -> f64 {
    let inner = h + critical_value(label, params) - reduced_a(label, l, p2, params);
    reduced_b(label, l, p2, params) - inner * inner
}

/// `q = s1^2 - s1 + s2^2 - s2`, minus the coupling.
pub fn q_param(params: &ModelParams) -> f64 {
    -params.coupling()
}

/// `Q(p2) = 4 q^2 (p2 - 2)(p2 - 2R) - (1 - 2 s1)^2 (R(s2 - 1) + s2)^2`,
/// so that `P_0(p2) = p2^2 Q(p2) / R^2` for both labels.
pub fn poly_q(params: &ModelParams) -> Poly {
    let q = q_param(params);
    let r = params.ratio();
    let d = (1.0 - 2.0 * params.s1()) * (r * (params.s2() - 1.0) + params.s2());
    Poly::linear_factor(2.0)
        .mul(&Poly::linear_factor(2.0 * r))
        .scale(4.0 * q * q)
        .add(&Poly::constant(-d * d))
}

/// `gamma_B`, the radicand in the roots `zeta3, zeta4 = 1 + R -+ sqrt(gamma_B) / (2 c)`.
/// Kept in expanded form; `4 q^2 (1 + R)^2 - gamma_A` is the independent check.
pub fn gamma_b(params: &ModelParams) -> f64 {
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    let (s1_2, s1_3, s1_4) = (s1 * s1, s1.powi(3), s1.powi(4));
    let s2_2 = s2 * s2;
    r * r
        * (4.0 * s1_4 - 8.0 * s1_3 + 4.0 * s1_2 * (3.0 * s2_2 - 4.0 * s2 + 2.0)
            - 4.0 * s1 * (3.0 * s2_2 - 4.0 * s2 + 1.0)
            + (s2 - 1.0).powi(2) * (4.0 * s2_2 + 1.0))
        - 2.0
            * r
            * (4.0 * s1_4 - 8.0 * s1_3 + 4.0 * s1_2 * (s2_2 - s2 + 1.0)
                - 4.0 * s1 * (s2 - 1.0) * s2
                + s2 * (4.0 * s2.powi(3) - 8.0 * s2_2 + 3.0 * s2 + 1.0))
        + 4.0 * s1_4
        - 8.0 * s1_3
        + 4.0 * s1_2 * (3.0 * s2_2 - 2.0 * s2 + 1.0)
        + 4.0 * s1 * s2 * (2.0 - 3.0 * s2)
        + s2_2 * (4.0 * s2_2 - 8.0 * s2 + 5.0)
}

/// Roots of `P_0` from the closed form together with the numerical cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct P0Roots {
    /// `(0, 0, zeta3, zeta4)`.
    pub zeta: [f64; 4],
    pub numerical: QuarticRoots,
    /// Largest distance between `zeta3, zeta4` and the matching numerical roots.
    pub deviation: f64,
}

/// Agreement required between the closed-form and numerical `zeta3, zeta4`.
pub const ROOT_TOL: f64 = 1e-9;

pub fn roots_p0(label: SingLabel, params: &ModelParams) -> Result<P0Roots> {
    let gb = gamma_b(params);
    if gb < 0.0 {
        return Err(Error::Domain(format!("gamma_B = {gb} < 0: zeta3 and zeta4 are not real")));
    }
    let c = params.coupling();
    if c <= 0.0 {
        return Err(Error::Domain("P_0 vanishes identically at the corner parameters".into()));
    }
    let r = params.ratio();
    let half_width = gb.sqrt() / (2.0 * c);
    let zeta = [0.0, 0.0, 1.0 + r - half_width, 1.0 + r + half_width];

    let numerical = quartic_roots(poly_p_coefficients(label, 0.0, 0.0, params).quartic_coefficients())?;
    let mut by_size = numerical.roots;
    by_size.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    // the double root at 0 has the two smallest moduli; match the rest in order
    let mut rest = [by_size[2], by_size[3]];
    rest.sort_by(|a, b| a.re.total_cmp(&b.re));
    let deviation = rest
        .iter()
        .zip(&zeta[2..])
        .map(|(z, w)| (z - w).norm())
        .fold(0.0f64, f64::max);
    if !(deviation <= ROOT_TOL) {
        return Err(Error::RootMismatch { deviation });
    }
    Ok(P0Roots {
        zeta,
        numerical,
        deviation,
    })
}

/// A point on the reduced space of one of the two charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    pub l: f64,
    pub q2: f64,
    pub p2: f64,
}

impl ReducedPoint {
    /// A representative point of `S^2 x S^2` (with `theta1 = 0`) on this
    /// reduced orbit.
    pub fn to_phase_point(&self, label: SingLabel, params: &ModelParams) -> Result<PhasePoint> {
        let r = params.ratio();
        let (lo, hi) = physical_interval(label, self.l, r)?;
        let slack = 1e-12 * (1.0 + r);
        if !(self.p2 >= lo - slack && self.p2 <= hi + slack) {
            return Err(Error::Domain(format!(
                "p2 = {} is outside the physical interval [{lo}, {hi}]",
                self.p2
            )));
        }
        let p = self.p2.clamp(lo, hi);
        let (z1, z2, theta2) = match label {
            SingLabel::NS => (self.l + 1.0 - p, p / r - 1.0, -self.q2),
            SingLabel::SN => (self.l - 1.0 + p, 1.0 - p / r, self.q2),
        };
        PhasePoint::from_cylindrical(0.0, z1.clamp(-1.0, 1.0), theta2, z2.clamp(-1.0, 1.0))
    }
}

/// Piecewise linear Duistermaat-Heckman profile on `[-2, 2R]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DHFunction {
    pub r: f64,
    /// `(l, slope on the right of l)`, ascending in `l`.
    pub breakpoints: Vec<(f64, f64)>,
    pub domain: (f64, f64),
    /// Levels of the two focus-focus points.
    pub ff_levels: [f64; 2],
}

impl DHFunction {
    pub fn eval(&self, l: f64) -> f64 {
        let (lo, hi) = self.domain;
        if l <= lo || l >= hi {
            return 0.0;
        }
        let mut value = 0.0;
        let mut prev = lo;
        let mut slope = 0.0;
        for &(x, s) in &self.breakpoints {
            if x >= l {
                break;
            }
            value += slope * (x - prev);
            prev = x;
            slope = s;
        }
        value + slope * (l - prev)
    }

    /// Slope on the right of `l`.
    pub fn slope_after(&self, l: f64) -> f64 {
        self.breakpoints
            .iter()
            .take_while(|(x, _)| *x <= l)
            .last()
            .map_or(0.0, |(_, s)| *s)
    }

    /// Exact area under the profile.
    pub fn area(&self) -> f64 {
        let mut xs: Vec<f64> = self.breakpoints.iter().map(|b| b.0).collect();
        xs.push(self.domain.1);
        xs.windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.eval(w[0]) + self.eval(w[1])))
            .sum()
    }
}

/// The DH function in `N x S` scaled units: the length of the physical interval.
pub fn dh_function(r: f64) -> Result<DHFunction> {
    if !(r > 0.0 && r.is_finite()) || r == 1.0 {
        return Err(Error::InvalidParams(format!("R = {r} must be positive and different from 1")));
    }
    let mut breakpoints = vec![(-2.0, 1.0), (0.0, 0.0), (2.0 * r - 2.0, -1.0)];
    if r < 1.0 {
        breakpoints = vec![(-2.0, 1.0), (2.0 * r - 2.0, 0.0), (0.0, -1.0)];
    }
    let dh = DHFunction {
        r,
        breakpoints,
        domain: (-2.0, 2.0 * r),
        ff_levels: [0.0, 2.0 * r - 2.0],
    };
    // the profile must reproduce the interval length wherever it is sampled
    for k in 0..=64 {
        let l = -2.0 + (2.0 * r + 2.0) * k as f64 / 64.0;
        let (a, b) = physical_interval(SingLabel::NS, l, r)?;
        let diff = (dh.eval(l) - (b - a)).abs();
        if diff > 1e-12 * (1.0 + r) {
            return Err(Error::Domain(format!(
                "DH profile disagrees with the physical interval at l = {l} by {diff}"
            )));
        }
    }
    Ok(dh)
}
