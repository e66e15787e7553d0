//! The height invariant `(h1, h2)` of the two focus-focus points.
//!
//! `h1` belongs to `N x S` and `h2` to `S x N`. Both are reported in units of
//! `min(R1, R2)`, which makes `h1 + h2 = 2`.
//!
//! There are two independent routes. The closed form evaluates
//!
//! ```text
//! F = V1 N_A + V2 N_B(2) + V3 N_B(2R),   h1 = 2 u - F / pi
//! ```
//!
//! with the arctan/log expression in the gamma coefficients as a second
//! evaluation of the same `F`. The oracle measures the area below the critical
//! value on the reduced space directly, by quadrature.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{integrate, quartic_roots, EndpointMode, QuadratureSettings};
use crate::reduced::{self, SingLabel};
use crate::singularity::{degeneracy_band, discriminant_e};

/// `|s1 - 1/2|` or `|s2 - R/(R+1)|` below this selects case III.
pub const CASE_BAND: f64 = 1e-12;

/// Largest allowed gap between the two evaluations of `F`.
pub const BRANCH_TOL: f64 = 1e-8;

/// The partial-fraction sum for `F` cancels as `d -> 0` (near the case III
/// lines) and loses about `1e-14 / d^2` in absolute terms. The gap check is
/// widened by this factor, with a tenfold margin.
const DECOMPOSED_CANCELLATION: f64 = 1e-13;

/// Parameters with `-ILL_CONDITIONED < E < 0` are flagged rather than rejected
/// when the two evaluations of `F` disagree.
pub const ILL_CONDITIONED: f64 = 1e-6;

/// Default oracle tolerance.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaCoeffs {
    pub g_a: f64,
    pub g_b: f64,
    pub g_c: f64,
    pub g_d: f64,
}

/// `gamma_A = -E / R1^2`, expanded in `s1, s2, R`.
pub fn gamma_a(params: &ModelParams) -> f64 {
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    let k = (1.0 - 2.0 * s1).powi(2);
    -r * r * k * (s2 - 1.0).powi(2)
        + 2.0
            * r
            * (8.0 * s1.powi(4) - 16.0 * s1.powi(3)
                + 4.0 * s1 * s1 * (3.0 * s2 * s2 - 3.0 * s2 + 2.0)
                - 12.0 * s1 * (s2 - 1.0) * s2
                + s2 * (8.0 * s2.powi(3) - 16.0 * s2 * s2 + 7.0 * s2 + 1.0))
        - k * s2 * s2
}

pub fn gamma_coefficients(params: &ModelParams) -> Result<GammaCoeffs> {
    let g_a = gamma_a(params);
    let g_b = reduced::gamma_b(params);
    if g_b < 0.0 {
        return Err(Error::Domain(format!("gamma_B = {g_b} is negative")));
    }
    let b = g_b.sqrt();
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    let (r2, s1_2, s2_2) = (r * r, s1 * s1, s2 * s2);
    let (s1_3, s1_4, s2_3, s2_4) = (s1.powi(3), s1.powi(4), s2.powi(3), s2.powi(4));
    let w = -s1_2 + s1 - s2_2 + s2;

    let g_c = -4.0 * r2 * s1_2 * s2_2 + 8.0 * r2 * s1_2 * s2 - 4.0 * r2 * s1_2
        + 4.0 * r2 * s1 * s2_2
        - 8.0 * r2 * s1 * s2
        + 4.0 * r2 * s1
        - r2 * s2_2
        + 2.0 * r2 * s2
        - r2
        + 8.0 * r * s1_4
        - 16.0 * r * s1_3
        + 8.0 * r * s1_2 * s2_2
        - 8.0 * r * s1_2 * s2
        + 8.0 * r * s1_2
        - 8.0 * r * s1 * s2_2
        + 8.0 * r * s1 * s2
        + 8.0 * r * s2_4
        - 16.0 * r * s2_3
        + 6.0 * r * s2_2
        + 2.0 * r * s2
        + 4.0 * b * w
        - 8.0 * s1_4
        + 16.0 * s1_3
        - 20.0 * s1_2 * s2_2
        + 16.0 * s1_2 * s2
        - 8.0 * s1_2
        + 20.0 * s1 * s2_2
        - 16.0 * s1 * s2
        - 8.0 * s2_4
        + 16.0 * s2_3
        - 9.0 * s2_2;

    let g_d = -8.0 * r2 * s1_4 + 16.0 * r2 * s1_3 - 20.0 * r2 * s1_2 * s2_2
        + 24.0 * r2 * s1_2 * s2
        - 12.0 * r2 * s1_2
        + 20.0 * r2 * s1 * s2_2
        - 24.0 * r2 * s1 * s2
        + 4.0 * r2 * s1
        - 8.0 * r2 * s2_4
        + 16.0 * r2 * s2_3
        - 9.0 * r2 * s2_2
        + 2.0 * r2 * s2
        - r2
        + 4.0 * r * b * w
        + 8.0 * r * s1_4
        - 16.0 * r * s1_3
        + 8.0 * r * s1_2 * s2_2
        - 8.0 * r * s1_2 * s2
        + 8.0 * r * s1_2
        - 8.0 * r * s1 * s2_2
        + 8.0 * r * s1 * s2
        + 8.0 * r * s2_4
        - 16.0 * r * s2_3
        + 6.0 * r * s2_2
        + 2.0 * r * s2
        - 4.0 * s1_2 * s2_2
        + 4.0 * s1 * s2_2
        - s2_2;

    Ok(GammaCoeffs { g_a, g_b, g_c, g_d })
}

/// Smaller root of `alpha x^2 + beta x + gamma`, the upper integration limit.
fn upper_limit(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma = {gamma} must be positive")));
    }
    let disc = beta * beta - 4.0 * alpha * gamma;
    if disc < 0.0 {
        return Err(Error::Domain(format!("beta^2 - 4 alpha gamma = {disc} is negative")));
    }
    Ok((-beta - disc.sqrt()) / (2.0 * alpha))
}

/// `int_0^x0 dx / sqrt(alpha x^2 + beta x + gamma)` up to the first root `x0`.
pub fn integral_na(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    upper_limit(alpha, beta, gamma)?;
    let disc = beta * beta - 4.0 * alpha * gamma;
    let den = beta + 2.0 * (alpha * gamma).sqrt();
    if !(den < 0.0) {
        return Err(Error::Domain(format!(
            "beta + 2 sqrt(alpha gamma) = {den} must be negative for a positive log argument"
        )));
    }
    Ok((-disc.sqrt() / den).ln() / alpha.sqrt())
}

/// `int_0^x0 dx / ((delta - x) sqrt(alpha x^2 + beta x + gamma))` for `delta > x0`.
///
/// Uses the arctan form when `alpha delta^2 + beta delta + gamma < 0` and the
/// log form otherwise.
pub fn integral_nb(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<f64> {
    let x0 = upper_limit(alpha, beta, gamma)?;
    if !(delta > x0) {
        return Err(Error::Domain(format!(
            "delta = {delta} must lie beyond the upper limit {x0}"
        )));
    }
    let disc = beta * beta - 4.0 * alpha * gamma;
    let at_delta = gamma + delta * (beta + alpha * delta);
    if at_delta < 0.0 {
        let rad = -at_delta;
        let arg = (2.0 * gamma + delta * (beta + disc.sqrt())) / (2.0 * (gamma * rad).sqrt());
        Ok(2.0 / rad.sqrt() * arg.atan())
    } else if at_delta > 0.0 {
        let num = -2.0 * gamma - beta * delta + 2.0 * (gamma * at_delta).sqrt();
        Ok((num / (delta * disc.sqrt())).ln() / at_delta.sqrt())
    } else {
        Err(Error::Domain(format!("delta = {delta} is a root of the quadratic")))
    }
}

/// The arctan form of [`integral_nb`] continued to complex arguments, used to
/// compare the two branches.
pub fn integral_nb_arctan_complex(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Complex64 {
    let disc = Complex64::from(beta * beta - 4.0 * alpha * gamma).sqrt();
    let rad = Complex64::from(-gamma - delta * (beta + alpha * delta));
    let arg = (2.0 * gamma + delta * (beta + disc)) / (2.0 * (gamma * rad).sqrt());
    2.0 / rad.sqrt() * arg.atan()
}

/// Quadratic `Q(p2) = alpha p2^2 + beta p2 + gamma` of the height integral.
fn q_coefficients(params: &ModelParams) -> (f64, f64, f64) {
    let q = reduced::q_param(params);
    let r = params.ratio();
    (4.0 * q * q, -8.0 * (1.0 + r) * q * q, gamma_a(params))
}

/// `(2 s1 - 1)(R (s2 - 1) + s2)`; vanishes exactly in case III.
fn d_factor(params: &ModelParams) -> f64 {
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    (2.0 * s1 - 1.0) * (r * (s2 - 1.0) + s2)
}

fn check_f_domain(params: &ModelParams) -> Result<()> {
    if case_id(params) == CaseId::III {
        return Err(Error::Domain("F is not defined on the case III boundary".into()));
    }
    let g_a = gamma_a(params);
    if !(g_a > 0.0) {
        return Err(Error::Domain(format!("gamma_A = {g_a} must be positive")));
    }
    Ok(())
}

fn scaled_params(s1: f64, s2: f64, r: f64) -> Result<ModelParams> {
    ModelParams::new(1.0, r, s1, s2)
}

/// `F` through `V1 N_A + V2 N_B(2) + V3 N_B(2R)`.
pub fn decomposed_f(s1: f64, s2: f64, r: f64) -> Result<f64> {
    let params = scaled_params(s1, s2, r)?;
    check_f_domain(&params)?;
    let (alpha, beta, gamma) = q_coefficients(&params);
    let v1 = -(2.0 * s1 - 1.0) * (r * s2 - r + s2);
    let v2 = -(-2.0 * r * s1 * s2 + 2.0 * r * s1 + r * s2 - r - 2.0 * s1 * s2 + s2);
    let v3 = -(-2.0 * r * r * s1 * s2 + 2.0 * r * r * s1 + r * r * s2 - r * r - 2.0 * r * s1 * s2
        + r * s2);
    Ok(v1 * integral_na(alpha, beta, gamma)?
        + v2 * integral_nb(alpha, beta, gamma, 2.0)?
        + v3 * integral_nb(alpha, beta, gamma, 2.0 * r)?)
}

/// `F` through the arctan/log expression in the gamma coefficients.
pub fn closed_form_f(s1: f64, s2: f64, r: f64) -> Result<f64> {
    let params = scaled_params(s1, s2, r)?;
    check_f_domain(&params)?;
    let g = gamma_coefficients(&params)?;
    let d = d_factor(&params);
    let q = reduced::q_param(&params);
    let root_a = g.g_a.sqrt();
    Ok(2.0 * (g.g_c / (root_a * d)).atan()
        + 2.0 * r * (g.g_d / (root_a * d)).atan()
        + d / (2.0 * q) * (-g.g_b.sqrt() / (2.0 * (r + 1.0) * q + root_a)).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
}

impl CaseId {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
        }
    }

    /// Value of the step `u((s1 - 1/2)(s2 - R/(R+1)))` away from case III.
    fn heaviside(self) -> Option<f64> {
        match self {
            CaseId::I | CaseId::V => Some(1.0),
            CaseId::II | CaseId::IV => Some(0.0),
            CaseId::III => None,
        }
    }
}

pub fn case_id(params: &ModelParams) -> CaseId {
    let r = params.ratio();
    let a = params.s1() - 0.5;
    let b = params.s2() - r / (r + 1.0);
    if a.abs() <= CASE_BAND || b.abs() <= CASE_BAND {
        CaseId::III
    } else {
        match (a < 0.0, b < 0.0) {
            (true, true) => CaseId::I,
            (true, false) => CaseId::II,
            (false, true) => CaseId::IV,
            (false, false) => CaseId::V,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightInvariant {
    pub h1: f64,
    pub h2: f64,
    pub case_ns: CaseId,
    pub method: Method,
    /// `-1e-6 < E < 0`, where the closed form loses accuracy.
    pub ill_conditioned: bool,
    /// Gap between the two evaluations of `F` (0 in case III and for quadrature only).
    pub branch_gap: f64,
    /// `|h1_closed - h1_oracle|` when both were computed.
    pub closed_vs_oracle: Option<f64>,
}

fn require_focus_focus(params: &ModelParams) -> Result<f64> {
    let e = discriminant_e(params);
    let band = degeneracy_band(params);
    if e.abs() <= band {
        return Err(Error::Degenerate { e, band });
    }
    if e > 0.0 {
        return Err(Error::NoFocusFocus { e });
    }
    Ok(e)
}

/// Closed-form heights. `R < 1` is evaluated on the `Psi_3` image, where the
/// roles of the two singular points are exchanged.
pub fn height_closed(params: &ModelParams) -> Result<HeightInvariant> {
    let e = require_focus_focus(params)?;
    let ill_conditioned = e > -ILL_CONDITIONED;
    let case_ns = case_id(params);
    let (h1, h2, branch_gap) = if params.ratio() < 1.0 {
        let (a, b, gap) = closed_pair(&params.swapped(), ill_conditioned)?;
        (b, a, gap)
    } else {
        closed_pair(params, ill_conditioned)?
    };
    Ok(HeightInvariant {
        h1,
        h2,
        case_ns,
        method: Method::ClosedForm,
        ill_conditioned,
        branch_gap,
        closed_vs_oracle: None,
    })
}

/// `(h1, h2, branch gap)` for `R > 1`.
fn closed_pair(params: &ModelParams, ill_conditioned: bool) -> Result<(f64, f64, f64)> {
    let case = case_id(params);
    let Some(u) = case.heaviside() else {
        return Ok((1.0, 1.0, 0.0));
    };
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    let decomposed = decomposed_f(s1, s2, r)?;
    let arctan_log = closed_form_f(s1, s2, r)?;
    let gap = (decomposed - arctan_log).abs();
    let d = d_factor(params);
    let allowed = BRANCH_TOL.max(DECOMPOSED_CANCELLATION / (d * d));
    if !(gap <= allowed) && !ill_conditioned {
        return Err(Error::BranchSelection {
            decomposed,
            arctan_log,
        });
    }
    // the arctan/log form stays accurate where the partial fractions cancel
    let h1 = 2.0 * u - arctan_log / PI;
    let h2 = 2.0 * (1.0 - u) + arctan_log / PI;
    Ok((h1, h2, gap))
}

/// Oracle output with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleHeight {
    pub value: f64,
    pub error_estimate: f64,
    /// Largest `|c| - 1` seen at a quadrature node inside an arccos piece;
    /// only roundoff should ever show up here.
    pub arccos_overshoot: f64,
}

/// Tolerance on [`OracleHeight::arccos_overshoot`].
pub const OVERSHOOT_TOL: f64 = 1e-8;

/// Height of one singular point as the area `{H_0 < H_crit}` of the reduced
/// space at the critical level, divided by `2 pi`.
pub fn height_oracle(label: SingLabel, params: &ModelParams, tol: f64) -> Result<OracleHeight> {
    require_focus_focus(params)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol = {tol} must be positive")));
    }
    if params.ratio() < 1.0 {
        let other = match label {
            SingLabel::NS => SingLabel::SN,
            SingLabel::SN => SingLabel::NS,
        };
        return height_oracle(other, &params.swapped(), tol);
    }
    let r = params.ratio();
    let hc = reduced::critical_value(label, params);
    let p_max = 2.0f64.min(2.0 * r);

    // the angle measure changes form where |c| = 1, i.e. at the roots of P_0
    let roots = quartic_roots(
        reduced::poly_p_coefficients(label, 0.0, 0.0, params).quartic_coefficients(),
    )?;
    let edge = 1e-12 * p_max;
    let mut cuts = vec![0.0];
    cuts.extend(
        roots
            .real_roots()
            .into_iter()
            .filter(|&x| x > edge && x < p_max - edge),
    );
    cuts.push(p_max);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= edge);

    let ratio = |p: f64| {
        (hc - reduced::reduced_a(label, 0.0, p, params))
            / reduced::reduced_b(label, 0.0, p, params).sqrt()
    };
    let overshoot = Cell::new(0.0f64);
    let pieces = (cuts.len() - 1) as f64;
    let settings = QuadratureSettings {
        abs_tol: 2.0 * PI * tol / pieces,
        rel_tol: tol,
        max_subdivisions: 4000,
        endpoint_mode: EndpointMode::Both,
    };

    let mut area = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let c_mid = ratio(0.5 * (a + b));
        if c_mid >= 1.0 {
            area += 2.0 * PI * (b - a);
        } else if c_mid <= -1.0 {
            continue;
        } else {
            let q = integrate(
                |p| {
                    let c = ratio(p);
                    overshoot.set(overshoot.get().max(c.abs() - 1.0));
                    2.0 * (-c.clamp(-1.0, 1.0)).acos()
                },
                a,
                b,
                &settings,
            )?;
            area += q.value;
            error += q.error;
        }
    }
    Ok(OracleHeight {
        value: area / (2.0 * PI),
        error_estimate: error / (2.0 * PI),
        arccos_overshoot: overshoot.get(),
    })
}

/// Heights by the requested method. With [`Method::Both`] the closed-form
/// values are reported together with their distance from the oracle.
pub fn height(params: &ModelParams, method: Method, tol: f64) -> Result<HeightInvariant> {
    match method {
        Method::ClosedForm => height_closed(params),
        Method::Quadrature => {
            let e = require_focus_focus(params)?;
            let h1 = height_oracle(SingLabel::NS, params, tol)?.value;
            let h2 = height_oracle(SingLabel::SN, params, tol)?.value;
            Ok(HeightInvariant {
                h1,
                h2,
                case_ns: case_id(params),
                method,
                ill_conditioned: e > -ILL_CONDITIONED,
                branch_gap: 0.0,
                closed_vs_oracle: None,
            })
        }
        Method::Both => {
            let mut closed = height_closed(params)?;
            let oracle = height_oracle(SingLabel::NS, params, tol)?.value;
            closed.method = Method::Both;
            closed.closed_vs_oracle = Some((closed.h1 - oracle).abs());
            Ok(closed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(r1: f64, r2: f64, s1: f64, s2: f64) -> ModelParams {
        ModelParams::new(r1, r2, s1, s2).unwrap()
    }

    fn quad_na(alpha: f64, beta: f64, gamma: f64, delta: Option<f64>) -> f64 {
        let x0 = upper_limit(alpha, beta, gamma).unwrap();
        let settings = QuadratureSettings::with_tol(1e-12).endpoint_mode(EndpointMode::InverseSqrtRight);
        integrate(
            |x| {
                let s = (alpha * x * x + beta * x + gamma).max(0.0).sqrt();
                delta.map_or(1.0 / s, |d| 1.0 / ((d - x) * s))
            },
            0.0,
            x0,
            &settings,
        )
        .unwrap()
        .value
    }

    #[test]
    fn gamma_a_is_minus_e() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let q = p(rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let want = -discriminant_e(&q) / (q.r1() * q.r1());
            assert_relative_eq!(gamma_a(&q), want, max_relative = 1e-12, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(gamma_a(&p(1.0, 2.0, 0.5, 0.5)), 8.0, epsilon = 1e-14);
    }

    #[test]
    fn gamma_a_is_symmetric_in_s1() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let (r2, s1, s2) = (rng.gen_range(1.1..6.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            assert_relative_eq!(
                gamma_a(&p(1.0, r2, s1, s2)),
                gamma_a(&p(1.0, r2, 1.0 - s1, s2)),
                max_relative = 1e-12,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn gamma_b_at_half_gives_zeta3_two() {
        for (r, s2) in [(2.0, 0.3), (3.5, 0.8), (1.5, 0.5)] {
            let q = p(1.0, r, 0.5, s2);
            let c = q.coupling();
            assert_relative_eq!(
                reduced::gamma_b(&q).sqrt(),
                2.0 * c * (r - 1.0),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn gamma_b_matches_its_discriminant_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let q = p(1.0, rng.gen_range(1.1..6.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let qq = reduced::q_param(&q);
            let r = q.ratio();
            let want = qq * qq * 4.0 * (1.0 + r).powi(2) - gamma_a(&q);
            let got = reduced::gamma_b(&q);
            assert!((got - want).abs() <= 1e-12 * (1.0 + r * r));
        }
    }

    #[test]
    fn na_reference_and_quadrature() {
        let na = integral_na(1.0, -3.0, 2.0).unwrap();
        assert_relative_eq!(na, (3.0 + 2.0 * 2f64.sqrt()).ln(), max_relative = 1e-14);
        assert_abs_diff_eq!(na, quad_na(1.0, -3.0, 2.0, None), epsilon = 1e-9);
        let na = integral_na(4.0, -8.0, 3.0).unwrap();
        assert_abs_diff_eq!(na, quad_na(4.0, -8.0, 3.0, None), epsilon = 1e-9);
    }

    #[test]
    fn na_scaling() {
        let base = integral_na(1.0, -3.0, 2.0).unwrap();
        for c in [0.5, 2.0, 7.0] {
            let scaled = integral_na(c * c, -3.0 * c * c, 2.0 * c * c).unwrap();
            assert_relative_eq!(scaled, base / c, max_relative = 1e-13);
        }
    }

    #[test]
    fn na_domain_errors() {
        assert!(integral_na(-1.0, -3.0, 2.0).is_err());
        assert!(integral_na(1.0, 1.0, 2.0).is_err());
        assert!(integral_na(1.0, 3.0, 2.0).is_err());
    }

    #[test]
    fn nb_both_branches_against_quadrature() {
        // log branch: the quadratic is positive at delta = 5
        let nb = integral_nb(1.0, -3.0, 2.0, 5.0).unwrap();
        assert_abs_diff_eq!(nb, quad_na(1.0, -3.0, 2.0, Some(5.0)), epsilon = 1e-9);
        // arctan branch: delta between the roots of the quadratic
        let nb = integral_nb(1.0, -3.0, 2.0, 1.5).unwrap();
        assert_abs_diff_eq!(nb, quad_na(1.0, -3.0, 2.0, Some(1.5)), epsilon = 1e-9);
        assert!(integral_nb(1.0, -3.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn nb_large_delta_limit() {
        let na = integral_na(1.0, -3.0, 2.0).unwrap();
        let d = 1e6;
        assert_abs_diff_eq!(d * integral_nb(1.0, -3.0, 2.0, d).unwrap(), na, epsilon = 1e-4);
    }

    #[test]
    fn nb_branches_agree_by_continuation() {
        // the two forms are never real together; continuing the arctan form into
        // the log region must reproduce the log form
        for (alpha, beta, gamma, delta) in [(1.0, -3.0, 2.0, 5.0), (4.0, -8.0, 3.0, 2.5), (2.0, -7.0, 1.0, 9.0)] {
            let log_form = integral_nb(alpha, beta, gamma, delta).unwrap();
            let cont = integral_nb_arctan_complex(alpha, beta, gamma, delta);
            assert_abs_diff_eq!(cont.re, log_form, epsilon = 1e-12);
            assert!(cont.im.abs() < 1e-12);
        }
        let real = integral_nb(1.0, -3.0, 2.0, 1.5).unwrap();
        let cont = integral_nb_arctan_complex(1.0, -3.0, 2.0, 1.5);
        assert_abs_diff_eq!(cont.re, real, epsilon = 1e-14);
    }

    #[test]
    fn case_table() {
        assert_eq!(case_id(&p(1.0, 2.0, 0.25, 0.25)), CaseId::I);
        assert_eq!(case_id(&p(1.0, 2.0, 0.25, 0.75)), CaseId::II);
        assert_eq!(case_id(&p(1.0, 2.0, 0.5, 0.1)), CaseId::III);
        assert_eq!(case_id(&p(1.0, 2.0, 0.3, 2.0 / 3.0)), CaseId::III);
        assert_eq!(case_id(&p(1.0, 2.0, 0.75, 0.25)), CaseId::IV);
        assert_eq!(case_id(&p(1.0, 2.0, 0.75, 0.75)), CaseId::V);
    }

    #[test]
    fn trivial_cases_are_exactly_one() {
        for q in [p(1.0, 2.0, 0.5, 0.3), p(1.0, 3.0, 0.4, 0.75), p(2.0, 1.0, 0.5, 0.5)] {
            let h = height_closed(&q).unwrap();
            assert_eq!((h.h1, h.h2), (1.0, 1.0));
        }
        let o = height_oracle(SingLabel::NS, &p(1.0, 2.0, 0.5, 0.3), 1e-10).unwrap();
        assert_abs_diff_eq!(o.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn reference_heights() {
        // values from an independent scipy prototype of the area integral
        let cases = [
            ((0.25, 0.25, 2.0), 1.4398571190968),
            ((0.25, 0.75, 2.0), 0.90674185742549),
            ((0.4, 0.5, 3.0), 1.08542133115845),
            ((0.6, 0.3, 1.5), 0.87935432076826),
        ];
        for ((s1, s2, r), want) in cases {
            let q = p(1.0, r, s1, s2);
            let o = height_oracle(SingLabel::NS, &q, 1e-11).unwrap();
            assert_abs_diff_eq!(o.value, want, epsilon = 1e-9);
            assert!(o.arccos_overshoot <= OVERSHOOT_TOL);
            let h = height_closed(&q).unwrap();
            assert_abs_diff_eq!(h.h1, want, epsilon = 1e-8);
            assert!(h.branch_gap <= BRANCH_TOL);
        }
    }

    #[test]
    fn oracle_mirror_and_sum() {
        let a = height_oracle(SingLabel::NS, &p(1.0, 2.0, 0.25, 0.25), 1e-10).unwrap().value;
        let b = height_oracle(SingLabel::SN, &p(1.0, 2.0, 0.75, 0.25), 1e-10).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        let c = height_oracle(SingLabel::SN, &p(1.0, 2.0, 0.25, 0.25), 1e-10).unwrap().value;
        assert_abs_diff_eq!(a + c, 2.0, epsilon = 2e-9);
    }

    #[test]
    fn decomposed_matches_v_over_sqrt_q_quadrature() {
        // F = int_0^zeta3 V(p) / ((2 - p)(2R - p) sqrt(Q(p))) dp with V linear
        let (s1, s2, r) = (0.25, 0.25, 2.0);
        let q = p(1.0, r, s1, s2);
        let (alpha, beta, gamma) = q_coefficients(&q);
        let v1 = -(2.0 * s1 - 1.0) * (r * s2 - r + s2);
        let v2 = -(-2.0 * r * s1 * s2 + 2.0 * r * s1 + r * s2 - r - 2.0 * s1 * s2 + s2);
        let v3 = -(-2.0 * r * r * s1 * s2 + 2.0 * r * r * s1 + r * r * s2 - r * r - 2.0 * r * s1 * s2 + r * s2);
        let want = v1 * quad_na(alpha, beta, gamma, None)
            + v2 * quad_na(alpha, beta, gamma, Some(2.0))
            + v3 * quad_na(alpha, beta, gamma, Some(2.0 * r));
        assert_abs_diff_eq!(decomposed_f(s1, s2, r).unwrap(), want, epsilon = 1e-8);
        // the quadratic is the displayed Q
        let poly = reduced::poly_q(&q);
        assert_relative_eq!(poly.0[2], alpha, max_relative = 1e-14);
        assert_relative_eq!(poly.0[1], beta, max_relative = 1e-14);
        assert_relative_eq!(poly.0[0], gamma, max_relative = 1e-12);
    }

    #[test]
    fn f_is_odd_under_s1_mirror() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let mut checked = 0;
        while checked < 100 {
            let (s1, s2, r) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95), rng.gen_range(1.2..6.0));
            let q = p(1.0, r, s1, s2);
            if discriminant_e(&q) > -1e-3 || case_id(&q) == CaseId::III {
                continue;
            }
            let a = decomposed_f(s1, s2, r).unwrap();
            let b = decomposed_f(1.0 - s1, s2, r).unwrap();
            assert_abs_diff_eq!(a, -b, epsilon = 1e-10);
            checked += 1;
        }
    }

    #[test]
    fn f_rejects_case_three_and_positive_e() {
        assert!(decomposed_f(0.5, 0.3, 2.0).is_err());
        assert!(closed_form_f(0.3, 2.0 / 3.0, 2.0).is_err());
        assert!(closed_form_f(0.0, 0.0, 2.0).is_err());
        assert!(matches!(height_closed(&p(1.0, 2.0, 0.0, 0.0)), Err(Error::NoFocusFocus { .. })));
    }

    #[test]
    fn small_ratio_goes_through_the_swap() {
        let q = p(2.0, 1.0, 0.3, 0.4);
        let h = height_closed(&q).unwrap();
        let o1 = height_oracle(SingLabel::NS, &q, 1e-10).unwrap().value;
        let o2 = height_oracle(SingLabel::SN, &q, 1e-10).unwrap().value;
        assert_abs_diff_eq!(h.h1, o1, epsilon = 1e-7);
        assert_abs_diff_eq!(h.h2, o2, epsilon = 1e-7);
        assert_abs_diff_eq!(h.h1 + h.h2, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn both_method_reports_the_gap() {
        let h = height(&p(1.0, 2.0, 0.25, 0.25), Method::Both, ORACLE_TOL).unwrap();
        assert!(h.closed_vs_oracle.unwrap() < 1e-6);
        let h = height(&p(1.0, 2.0, 0.25, 0.25), Method::Quadrature, ORACLE_TOL).unwrap();
        assert_abs_diff_eq!(h.h1 + h.h2, 2.0, epsilon = 2e-9);
    }
}
