//! Rank-0 classification through the discriminant `E`, the number of
//! focus-focus points, and the rank-1 elliptic-regular criterion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PointId, HALF_TOL};

/// `|E| <= DEGENERACY_BAND * R1 * R2` counts as `E = 0`.
pub const DEGENERACY_BAND: f64 = 1e-10;

/// Distance kept from the edge of the `(z1, l)` strip in rank-1 grids.
pub const STRIP_MARGIN: f64 = 1e-6;

/// Fourth factor of the discriminant at `N x S` and `S x N`.
pub fn discriminant_e(params: &ModelParams) -> f64 {
    let (r1, r2, s1, s2) = (params.r1(), params.r2(), params.s1(), params.s2());
    let a = (1.0 - 2.0 * s1).powi(2);
    let m = (s1 - 1.0) * s1;
    r2 * r2 * a * (s2 - 1.0).powi(2) + r1 * r1 * a * s2 * s2
        - 2.0
            * r1
            * r2
            * (8.0 * m * m + s2 - 12.0 * m * s2 + (7.0 + 12.0 * m) * s2 * s2
                - 16.0 * s2.powi(3)
                + 8.0 * s2.powi(4))
}

pub fn degeneracy_band(params: &ModelParams) -> f64 {
    DEGENERACY_BAND * params.r1() * params.r2()
}

/// Fourth factor of the discriminant at `N x N` and `S x S`, divided by `R1^2`.
/// Positive on the whole parameter range; only used as a classification cross-check.
pub fn d_bar_poles(params: &ModelParams) -> f64 {
    let (s1, s2, r) = (params.s1(), params.s2(), params.ratio());
    let a = (1.0 - 2.0 * s1).powi(2);
    let m = (s2 - 1.0) * s2;
    r * r * a * (1.0 - s2).powi(2)
        + a * s2 * s2
        + 2.0
            * r
            * (-16.0 * s1.powi(3) + 8.0 * s1.powi(4) - 20.0 * s1 * m
                + 4.0 * s1 * s1 * (2.0 + 5.0 * m)
                + m * (1.0 + 8.0 * m))
}

/// `1 + 8 s2 + 8 s2^2 - 32 s2^3 + 16 s2^4`, which drives the `s1 = 1/2` case.
pub fn half_quartic(s2: f64) -> f64 {
    1.0 + 8.0 * s2 + 8.0 * s2 * s2 - 32.0 * s2.powi(3) + 16.0 * s2.powi(4)
}

/// Discriminant in `Y = X^2` of the characteristic polynomial of `A_L + A_H`
/// at `s1 = 1/2`: positive at the pole products, negative at `N x S` and `S x N`.
pub fn auxiliary_discriminant(point: PointId, params: &ModelParams) -> f64 {
    let v = 4.0 * half_quartic(params.s2()) / (params.r1() * params.r2());
    match point {
        PointId::NN | PointId::SS => v,
        PointId::NS | PointId::SN => -v,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityKind {
    EllipticElliptic,
    FocusFocus,
    Degenerate,
}

impl SingularityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SingularityKind::EllipticElliptic => "elliptic-elliptic",
            SingularityKind::FocusFocus => "focus-focus",
            SingularityKind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityReport {
    pub point_id: PointId,
    pub rank: u8,
    pub kind: SingularityKind,
    pub e_value: f64,
    /// Sign of the characteristic-polynomial discriminant; 0 at `s1 = 1/2`,
    /// where it vanishes identically.
    pub d_sign: i8,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

pub fn classify_fixed_points(params: &ModelParams) -> [SingularityReport; 4] {
    let e = discriminant_e(params);
    let band = degeneracy_band(params);
    let at_half = (params.s1() - 0.5).abs() <= HALF_TOL;
    PointId::ALL.map(|point_id| {
        let pole_pair = matches!(point_id, PointId::NN | PointId::SS);
        let (kind, d_sign) = if at_half {
            let kind = if auxiliary_discriminant(point_id, params) > 0.0 {
                SingularityKind::EllipticElliptic
            } else {
                SingularityKind::FocusFocus
            };
            (kind, 0)
        } else if pole_pair {
            (SingularityKind::EllipticElliptic, sign(d_bar_poles(params)))
        } else if e.abs() <= band {
            (SingularityKind::Degenerate, 0)
        } else if e < 0.0 {
            (SingularityKind::FocusFocus, -1)
        } else {
            (SingularityKind::EllipticElliptic, 1)
        };
        SingularityReport {
            point_id,
            rank: 0,
            kind,
            e_value: e,
            d_sign,
        }
    })
}

/// Number of focus-focus points: 2 for `E < 0`, 0 for `E > 0`.
pub fn n_ff(params: &ModelParams) -> Result<u8> {
    let e = discriminant_e(params);
    let band = degeneracy_band(params);
    if e.abs() <= band {
        Err(Error::Degenerate { e, band })
    } else if e < 0.0 {
        Ok(2)
    } else {
        Ok(0)
    }
}

/// Right-hand side of the rank-1 criterion on the level `L = l` at height `z1`.
/// Rank-1 points are elliptic-regular when it is negative.
pub fn rank1_margin(z1: f64, l: f64, params: &ModelParams) -> Result<f64> {
    let (r1, r2) = (params.r1(), params.r2());
    let z2 = (l - r1 * z1) / r2;
    let a = 1.0 - z1 * z1;
    let b = 1.0 - z2 * z2;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "(z1, l) = ({z1}, {l}) is outside the rank-1 strip (z2 = {z2})"
        )));
    }
    let num = r1 * r1 * a * a + 2.0 * z1 * z2 * r1 * r2 * a * b + r2 * r2 * b * b;
    Ok(-num / (r2 * r2 * (a * b).powf(1.5)))
}

/// Interval of admissible `z1` on the level `L = l`, shrunk by [`STRIP_MARGIN`].
pub fn z1_range(l: f64, params: &ModelParams) -> Option<(f64, f64)> {
    let (r1, r2) = (params.r1(), params.r2());
    let lo = (-1.0f64).max((l - r2) / r1) + STRIP_MARGIN;
    let hi = 1.0f64.min((l + r2) / r1) - STRIP_MARGIN;
    (lo < hi).then_some((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemitoricVerdict {
    pub is_semitoric: bool,
    pub n_ff: u8,
    pub degenerate: bool,
    /// The least negative rank-1 margin over the grid, i.e. the sample
    /// closest to violating the criterion.
    pub rank1_margin_min: f64,
}

pub fn check_semitoric(params: &ModelParams, grid_n: usize) -> Result<SemitoricVerdict> {
    if grid_n < 2 {
        return Err(Error::Domain(format!("grid_n must be at least 2, got {grid_n}")));
    }
    let total = params.r1() + params.r2();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..grid_n {
        let l = -total + 2.0 * total * (i as f64 + 0.5) / grid_n as f64;
        let Some((lo, hi)) = z1_range(l, params) else {
            continue;
        };
        for j in 0..grid_n {
            let z1 = lo + (hi - lo) * j as f64 / (grid_n - 1) as f64;
            worst = worst.max(rank1_margin(z1, l, params)?);
        }
    }
    let (n_ff, degenerate) = match n_ff(params) {
        Ok(n) => (n, false),
        Err(Error::Degenerate { .. }) => (0, true),
        Err(e) => return Err(e),
    };
    Ok(SemitoricVerdict {
        is_semitoric: !degenerate && worst < 0.0,
        n_ff,
        degenerate,
        rank1_margin_min: worst,
    })
}
