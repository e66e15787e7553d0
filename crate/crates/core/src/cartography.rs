//! Momentum-map images and polygon-invariant representatives.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{momentum_map, ModelParams, PointId};
use crate::numerics::{maximize_golden, minimize_golden};
use crate::reduced::{self, dh_function, physical_interval, SingLabel};
use crate::singularity::{degeneracy_band, discriminant_e, n_ff};

/// Golden-section tolerance for the envelope, in `p2` units.
const ENVELOPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub l: f64,
    pub h_min: f64,
    pub h_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageBoundary {
    /// Unscaled `(L, H)` envelope, ascending in `L`.
    pub samples: Vec<BoundarySample>,
    /// Critical values of the focus-focus points (empty when there are none).
    pub ff_values: Vec<(f64, f64)>,
    /// Values at `N x N`, `N x S`, `S x N`, `S x S`.
    pub corner_values: [(f64, f64); 4],
}

impl ImageBoundary {
    /// Linear interpolation of the envelope at `l`, plus the largest change
    /// of either envelope across the bracketing cell.
    pub fn envelope_at(&self, l: f64) -> Option<(BoundarySample, f64)> {
        // absorb rounding in the end levels
        let (first, last) = (self.samples.first()?.l, self.samples.last()?.l);
        let slack = 1e-12 * (last - first).abs().max(1.0);
        let l = if l < first && first - l <= slack {
            first
        } else if l > last && l - last <= slack {
            last
        } else {
            l
        };
        let i = self.samples.windows(2).position(|w| w[0].l <= l && l <= w[1].l)?;
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let t = if b.l > a.l { (l - a.l) / (b.l - a.l) } else { 0.0 };
        let lerp = |x: f64, y: f64| x + t * (y - x);
        let sample = BoundarySample {
            l,
            h_min: lerp(a.h_min, b.h_min),
            h_max: lerp(a.h_max, b.h_max),
        };
        // neighbouring cells too, so that a kink at a grid node is covered
        let lo = i.saturating_sub(1);
        let hi = (i + 2).min(self.samples.len() - 1);
        let resolution = self.samples[lo..=hi]
            .windows(2)
            .map(|w| (w[1].h_min - w[0].h_min).abs().max((w[1].h_max - w[0].h_max).abs()))
            .fold(0.0f64, f64::max);
        Some((sample, resolution))
    }

    /// Distance from `(l, h)` to the nearer envelope curve at `l`, and the
    /// resolution of the grid there. Negative distance means outside.
    pub fn distance_to_envelope(&self, l: f64, h: f64) -> Option<(f64, f64)> {
        let (s, res) = self.envelope_at(l)?;
        Some(((h - s.h_min).min(s.h_max - h), res))
    }
}

/// Envelope of `H` on the reduced level `l` of the `N x S` chart, in scaled units.
fn envelope(params: &ModelParams, l: f64) -> Result<(f64, f64)> {
    let label = SingLabel::NS;
    let (a, b) = physical_interval(label, l, params.ratio())?;
    if b - a <= 1e-14 {
        let h = reduced::reduced_a(label, l, a, params);
        return Ok((h, h));
    }
    let upper = |p: f64| {
        reduced::reduced_a(label, l, p, params) + reduced::reduced_b(label, l, p, params).max(0.0).sqrt()
    };
    let lower = |p: f64| {
        reduced::reduced_a(label, l, p, params) - reduced::reduced_b(label, l, p, params).max(0.0).sqrt()
    };
    let max = maximize_golden(upper, a, b, ENVELOPE_TOL)?;
    let min = minimize_golden(lower, a, b, ENVELOPE_TOL)?;
    Ok((min.value, max.value))
}

/// Samples the image of `(L, H)` at `n + 1` evenly spaced values of `L`.
pub fn image_boundary(params: &ModelParams, n: usize) -> Result<ImageBoundary> {
    if n < 16 {
        return Err(Error::Domain(format!("image_boundary needs n >= 16, got {n}")));
    }
    let r = params.ratio();
    let (lo, hi) = reduced::level_range(SingLabel::NS, r);
    let samples = (0..=n)
        .map(|i| {
            let l = if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
            let (h_min, h_max) = envelope(params, l)?;
            Ok(BoundarySample {
                l: params.r1() * reduced::scaled_level(SingLabel::NS, l, params),
                h_min,
                h_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let corner_values = PointId::ALL.map(|id| {
        let m = momentum_map(&id.phase_point(), params).expect("poles lie on the spheres");
        (m.l_val, m.h_val)
    });
    let ff_values = match n_ff(params) {
        Ok(2) => vec![corner_values[1], corner_values[2]],
        _ => Vec::new(),
    };
    Ok(ImageBoundary {
        samples,
        ff_values,
        corner_values,
    })
}

/// A polygon-invariant representative in scaled units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon {
    /// Boundary vertices, counterclockwise from the left corner.
    pub vertices: Vec<(f64, f64)>,
    /// Upper boundary from left to right.
    pub top: Vec<(f64, f64)>,
    /// Lower boundary from left to right.
    pub bottom: Vec<(f64, f64)>,
    /// Cut directions; empty when there are no focus-focus points.
    pub cuts: Vec<i8>,
    /// Levels of the focus-focus points (or of `N x S`, `S x N` without them).
    pub ff_l: [f64; 2],
    /// Ratio used for the construction; above 1 in every representative.
    pub r: f64,
    /// Length unit of the scaled coordinates, `min(R1, R2)`.
    pub unit: f64,
    /// Accumulated integer shear.
    pub shear: i64,
}

/// Left anchor of every representative.
pub const ANCHOR_L: f64 = -2.0;

fn piecewise_at(chain: &[(f64, f64)], l: f64) -> Option<f64> {
    let w = chain.windows(2).find(|w| w[0].0 <= l && l <= w[1].0)?;
    let (a, b) = (w[0], w[1]);
    if b.0 == a.0 {
        return Some(a.1);
    }
    Some(a.1 + (b.1 - a.1) * (l - a.0) / (b.0 - a.0))
}

/// Drops interior points where the slope does not change.
fn simplify(chain: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(chain.len());
    for p in chain {
        if let Some(last) = out.last() {
            if (p.0 - last.0).abs() < 1e-14 {
                continue;
            }
        }
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross.abs() <= 1e-12 {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

fn slopes(chain: &[(f64, f64)]) -> Vec<f64> {
    chain.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect()
}

impl Polygon {
    pub fn top_at(&self, l: f64) -> Option<f64> {
        piecewise_at(&self.top, l)
    }

    pub fn bottom_at(&self, l: f64) -> Option<f64> {
        piecewise_at(&self.bottom, l)
    }

    pub fn width_at(&self, l: f64) -> Option<f64> {
        Some(self.top_at(l)? - self.bottom_at(l)?)
    }

    /// Vertices in unscaled `(L, y)` coordinates.
    pub fn unscaled_vertices(&self) -> Vec<(f64, f64)> {
        self.vertices
            .iter()
            .map(|&(l, y)| (self.unit * (l + 1.0 - self.r), self.unit * y))
            .collect()
    }

    fn from_chains(
        bottom: Vec<(f64, f64)>,
        top: Vec<(f64, f64)>,
        cuts: Vec<i8>,
        r: f64,
        unit: f64,
        shear: i64,
    ) -> Result<Self> {
        let bottom = simplify(bottom);
        let top = simplify(top);
        let mut vertices = bottom.clone();
        for &p in top.iter().rev() {
            let first = vertices[0];
            let last = *vertices.last().expect("bottom chain is nonempty");
            let same = |q: (f64, f64)| (q.0 - p.0).abs() < 1e-12 && (q.1 - p.1).abs() < 1e-12;
            if !same(last) && !same(first) {
                vertices.push(p);
            }
        }
        let poly = Polygon {
            vertices,
            top,
            bottom,
            cuts,
            ff_l: [0.0, 2.0 * r - 2.0],
            r,
            unit,
            shear,
        };
        poly.validate()?;
        Ok(poly)
    }

    /// Integer edge slopes, a convex lower chain and a concave upper chain.
    pub fn validate(&self) -> Result<()> {
        for (name, chain, sign) in [("bottom", &self.bottom, 1.0), ("top", &self.top, -1.0)] {
            let s = slopes(chain);
            for &k in &s {
                if (k - k.round()).abs() > 1e-9 {
                    return Err(Error::InvalidPolygon(format!("{name} edge slope {k} is not an integer")));
                }
            }
            if s.windows(2).any(|w| sign * (w[1] - w[0]) < -1e-9) {
                return Err(Error::InvalidPolygon(format!("{name} chain is not convex: slopes {s:?}")));
            }
        }
        Ok(())
    }
}

fn validate_cut(e: i8) -> Result<()> {
    if e == 1 || e == -1 {
        Ok(())
    } else {
        Err(Error::InvalidPolygon(format!("cut direction {e} must be +1 or -1")))
    }
}

/// Flat-bottom representative for a ratio `r > 1` and cut directions `cuts`.
fn build(r: f64, unit: f64, cuts: [i8; 2], keep_cuts: bool) -> Result<Polygon> {
    let dh = dh_function(r)?;
    let levels = [ANCHOR_L, dh.ff_levels[0], dh.ff_levels[1], 2.0 * r];
    let mut bottom = vec![(ANCHOR_L, 0.0)];
    let mut slope = 0.0;
    let mut y = 0.0;
    let mut prev = ANCHOR_L;
    for (i, &l) in levels.iter().enumerate().skip(1) {
        y += slope * (l - prev);
        bottom.push((l, y));
        prev = l;
        if i <= 2 && cuts[i - 1] == -1 {
            slope += 1.0;
        }
    }
    let top = bottom.iter().map(|&(l, y)| (l, y + dh.eval(l))).collect();
    let cuts = if keep_cuts { cuts.to_vec() } else { Vec::new() };
    Polygon::from_chains(bottom, top, cuts, r, unit, 0)
}

/// Grid size for locating the connected component of `E > 0`.
pub const COMPONENT_GRID: usize = 400;

/// Cut-shape of the polygon for parameters in `E > 0`: `[1, -1]` for the
/// component of `(s1, s2) = (0, 0)` and `(1, 1)`, `[-1, 1]` for that of
/// `(1, 0)` and `(0, 1)`.
pub fn component_shape(params: &ModelParams) -> Result<[i8; 2]> {
    let n = COMPONENT_GRID;
    let (r1, r2) = (params.r1(), params.r2());
    let e_at = |i: usize, j: usize| {
        let q = ModelParams::new(r1, r2, i as f64 / n as f64, j as f64 / n as f64)
            .expect("grid stays in the unit square");
        discriminant_e(&q) > degeneracy_band(&q)
    };
    let positive: Vec<bool> = (0..=n).flat_map(|i| (0..=n).map(move |j| (i, j))).map(|(i, j)| e_at(i, j)).collect();
    let idx = |i: usize, j: usize| i * (n + 1) + j;

    // label the components reached from the four corners
    let mut label = vec![0i8; (n + 1) * (n + 1)];
    let seeds = [((0, 0), 1i8), ((n, n), 1), ((n, 0), -1), ((0, n), -1)];
    for ((i0, j0), tag) in seeds {
        if !positive[idx(i0, j0)] || label[idx(i0, j0)] != 0 {
            if label[idx(i0, j0)] == -tag {
                return Err(Error::InvalidPolygon(
                    "one E > 0 component reaches corners of both shapes".into(),
                ));
            }
            continue;
        }
        let mut queue = VecDeque::from([(i0, j0)]);
        label[idx(i0, j0)] = tag;
        while let Some((i, j)) = queue.pop_front() {
            let neighbours = [
                (i.wrapping_sub(1), j),
                (i + 1, j),
                (i, j.wrapping_sub(1)),
                (i, j + 1),
            ];
            for (a, b) in neighbours {
                if a > n || b > n || !positive[idx(a, b)] {
                    continue;
                }
                match label[idx(a, b)] {
                    0 => {
                        label[idx(a, b)] = tag;
                        queue.push_back((a, b));
                    }
                    t if t != tag => {
                        return Err(Error::InvalidPolygon(
                            "one E > 0 component reaches corners of both shapes".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
    }

    // nearest labelled node to the requested parameters
    let (si, sj) = (params.s1() * n as f64, params.s2() * n as f64);
    let mut best: Option<(f64, i8)> = None;
    let reach = 3i64;
    let (ci, cj) = (si.round() as i64, sj.round() as i64);
    for i in (ci - reach).max(0)..=(ci + reach).min(n as i64) {
        for j in (cj - reach).max(0)..=(cj + reach).min(n as i64) {
            let tag = label[idx(i as usize, j as usize)];
            if tag == 0 {
                continue;
            }
            let d = (i as f64 - si).hypot(j as f64 - sj);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, tag));
            }
        }
    }
    match best {
        Some((_, 1)) => Ok([1, -1]),
        Some(_) => Ok([-1, 1]),
        None => Err(Error::InvalidPolygon(format!(
            "({}, {}) is not connected to any corner of the E > 0 region",
            params.s1(),
            params.s2()
        ))),
    }
}

/// Canonical representative: bottom chain from `(-2, 0)` with slope 0, raised
/// by one at every focus-focus level with a downward cut; the top chain is the
/// bottom plus the Duistermaat-Heckman profile. `R < 1` is built on the
/// `Psi_3` image.
pub fn polygon_representative(params: &ModelParams, cuts: (i8, i8)) -> Result<Polygon> {
    if params.ratio() < 1.0 {
        return polygon_representative(&params.swapped(), cuts);
    }
    validate_cut(cuts.0)?;
    validate_cut(cuts.1)?;
    let unit = params.r1();
    match n_ff(params)? {
        2 => build(params.ratio(), unit, [cuts.0, cuts.1], true),
        _ => build(params.ratio(), unit, component_shape(params)?, false),
    }
}

/// `(l, y) -> (l, y + k (l - l0))` with `l0` the left anchor.
pub fn act_shear(poly: &Polygon, k: i64) -> Polygon {
    let shift = |chain: &[(f64, f64)]| -> Vec<(f64, f64)> {
        chain.iter().map(|&(l, y)| (l, y + k as f64 * (l - ANCHOR_L))).collect()
    };
    Polygon {
        vertices: shift(&poly.vertices),
        top: shift(&poly.top),
        bottom: shift(&poly.bottom),
        shear: poly.shear + k,
        ..poly.clone()
    }
}

/// Negates the cut direction `which` (1 or 2) and rebuilds the representative,
/// keeping the accumulated shear.
pub fn act_flip_cut(poly: &Polygon, which: u8, params: &ModelParams) -> Result<Polygon> {
    if poly.cuts.len() != 2 {
        return Err(Error::InvalidPolygon("flipping needs a polygon with two cuts".into()));
    }
    let mut cuts = (poly.cuts[0], poly.cuts[1]);
    match which {
        1 => cuts.0 = -cuts.0,
        2 => cuts.1 = -cuts.1,
        _ => return Err(Error::InvalidPolygon(format!("cut index {which} must be 1 or 2"))),
    }
    let fresh = polygon_representative(params, cuts)?;
    Ok(act_shear(&fresh, poly.shear))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(r1: f64, r2: f64, s1: f64, s2: f64) -> ModelParams {
        ModelParams::new(r1, r2, s1, s2).unwrap()
    }

    fn ff() -> ModelParams {
        p(1.0, 2.0, 0.5, 0.5)
    }

    #[test]
    fn representative_plus_plus() {
        let poly = polygon_representative(&ff(), (1, 1)).unwrap();
        assert_eq!(poly.top, vec![(-2.0, 0.0), (0.0, 2.0), (2.0, 2.0), (4.0, 0.0)]);
        assert_eq!(poly.bottom, vec![(-2.0, 0.0), (4.0, 0.0)]);
        assert_eq!(poly.vertices, vec![(-2.0, 0.0), (4.0, 0.0), (2.0, 2.0), (0.0, 2.0)]);
    }

    #[test]
    fn representative_plus_minus() {
        let poly = polygon_representative(&ff(), (1, -1)).unwrap();
        assert_eq!(poly.top, vec![(-2.0, 0.0), (0.0, 2.0), (4.0, 2.0)]);
        assert_eq!(poly.bottom, vec![(-2.0, 0.0), (2.0, 0.0), (4.0, 2.0)]);
    }

    #[test]
    fn lateral_corners_in_unscaled_units() {
        let poly = polygon_representative(&ff(), (1, 1)).unwrap();
        let v = poly.unscaled_vertices();
        let ls: Vec<f64> = v.iter().map(|x| x.0).collect();
        assert_eq!(ls.iter().cloned().fold(f64::INFINITY, f64::min), -3.0);
        assert_eq!(ls.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 3.0);
    }

    #[test]
    fn widths_follow_dh_for_all_cuts() {
        let params = p(1.0, 3.0, 0.45, 0.5);
        let dh = dh_function(3.0).unwrap();
        for cuts in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let poly = polygon_representative(&params, cuts).unwrap();
            for k in 0..=200 {
                let l = -2.0 + 8.0 * k as f64 / 200.0;
                assert_abs_diff_eq!(poly.width_at(l).unwrap(), dh.eval(l), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn exactly_one_chain_kinks_at_each_ff_level() {
        let poly = polygon_representative(&ff(), (1, -1)).unwrap();
        for (i, l) in poly.ff_l.iter().enumerate() {
            let kink = |f: &dyn Fn(f64) -> Option<f64>| {
                let h = 1e-3;
                ((f(l + h).unwrap() - f(*l).unwrap()) - (f(*l).unwrap() - f(l - h).unwrap())) / h
            };
            let top = kink(&|x| poly.top_at(x));
            let bottom = kink(&|x| poly.bottom_at(x));
            if poly.cuts[i] == 1 {
                assert_abs_diff_eq!(top, -1.0, epsilon = 1e-9);
                assert_abs_diff_eq!(bottom, 0.0, epsilon = 1e-9);
            } else {
                assert_abs_diff_eq!(top, 0.0, epsilon = 1e-9);
                assert_abs_diff_eq!(bottom, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn shear_group_action() {
        let poly = polygon_representative(&ff(), (1, 1)).unwrap();
        assert_eq!(act_shear(&poly, 0), poly);
        let s = act_shear(&poly, 1);
        for k in 0..=60 {
            let l = -2.0 + 6.0 * k as f64 / 60.0;
            assert_abs_diff_eq!(s.width_at(l).unwrap(), poly.width_at(l).unwrap(), epsilon = 1e-12);
        }
        assert_eq!(act_shear(&act_shear(&poly, -1), 1), poly);
        assert!(s.validate().is_ok());
    }

    #[test]
    fn flips() {
        let params = ff();
        let pp = polygon_representative(&params, (1, 1)).unwrap();
        let pm = act_flip_cut(&pp, 2, &params).unwrap();
        assert_eq!(pm, polygon_representative(&params, (1, -1)).unwrap());
        assert_eq!(act_flip_cut(&pm, 2, &params).unwrap(), pp);
        // left of the flipped level nothing moves
        for k in 0..=50 {
            let l = -2.0 + 4.0 * k as f64 / 50.0;
            assert_eq!(pp.top_at(l), pm.top_at(l));
            assert_eq!(pp.bottom_at(l), pm.bottom_at(l));
        }
        let sheared = act_shear(&pp, 2);
        let flipped = act_flip_cut(&sheared, 1, &params).unwrap();
        assert_eq!(flipped.shear, 2);
        assert!(act_flip_cut(&pp, 3, &params).is_err());
    }

    #[test]
    fn no_focus_focus_components() {
        let r2 = 2.0;
        let pm = build(2.0, 1.0, [1, -1], false).unwrap();
        let mp = build(2.0, 1.0, [-1, 1], false).unwrap();
        for (s1, s2) in [(0.0, 0.0), (1.0, 1.0), (0.02, 0.03)] {
            let poly = polygon_representative(&p(1.0, r2, s1, s2), (1, 1)).unwrap();
            assert_eq!(poly.vertices, pm.vertices, "at ({s1}, {s2})");
            assert!(poly.cuts.is_empty());
        }
        for (s1, s2) in [(1.0, 0.0), (0.0, 1.0), (0.97, 0.02)] {
            let poly = polygon_representative(&p(1.0, r2, s1, s2), (1, 1)).unwrap();
            assert_eq!(poly.vertices, mp.vertices, "at ({s1}, {s2})");
        }
    }

    #[test]
    fn small_ratio_uses_the_swap() {
        let a = polygon_representative(&p(2.0, 1.0, 0.5, 0.5), (1, 1)).unwrap();
        let b = polygon_representative(&p(1.0, 2.0, 0.5, 0.5), (1, 1)).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.unit, 1.0);
    }

    #[test]
    fn degenerate_params_are_rejected() {
        let (s1, r2) = (0.1, 2.0);
        let s2 = crate::numerics::find_root_bisect(|s2| discriminant_e(&p(1.0, r2, s1, s2)), 0.0, 0.5, 1e-15).unwrap();
        assert!(matches!(
            polygon_representative(&p(1.0, r2, s1, s2), (1, 1)),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn image_endpoints_and_ff_points() {
        let params = p(1.0, 2.0, 0.4, 0.5);
        let img = image_boundary(&params, 64).unwrap();
        let first = img.samples[0];
        let last = *img.samples.last().unwrap();
        assert_abs_diff_eq!(first.l, -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(last.l, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(last.h_min, last.h_max, epsilon = 1e-12);
        assert_abs_diff_eq!(last.h_max, 1.0 - 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(first.h_min, -(1.0 - 0.8), epsilon = 1e-12);
        assert_eq!(img.ff_values.len(), 2);
        for &(l, h) in &img.ff_values {
            let (d, _) = img.distance_to_envelope(l, h).unwrap();
            assert!(d > 1e-3, "ff value ({l}, {h}) is not interior: {d}");
        }
        assert!(img.samples.iter().all(|s| s.h_min <= s.h_max));
        assert!(image_boundary(&params, 15).is_err());
    }

    #[test]
    fn toric_corner_image() {
        // s1 = s2 = 0: H = z1, so on a level of L the range of H is the z1-range
        let params = p(1.0, 2.0, 0.0, 0.0);
        let img = image_boundary(&params, 32).unwrap();
        for s in &img.samples {
            let lo = (-1.0f64).max(s.l - 2.0);
            let hi = 1.0f64.min(s.l + 2.0);
            assert_abs_diff_eq!(s.h_min, lo, epsilon = 1e-9);
            assert_abs_diff_eq!(s.h_max, hi, epsilon = 1e-9);
        }
        assert!(img.ff_values.is_empty());
    }

    #[test]
    fn envelope_max_matches_dense_grid() {
        let params = p(1.0, 2.0, 0.3, 0.6);
        let (_, hmax) = envelope(&params, 0.0).unwrap();
        let n = 100_000;
        let dense = (0..=n)
            .map(|i| {
                let x = 2.0 * i as f64 / n as f64;
                reduced::reduced_a(SingLabel::NS, 0.0, x, &params)
                    + reduced::reduced_b(SingLabel::NS, 0.0, x, &params).max(0.0).sqrt()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(hmax >= dense - 1e-12);
        assert!(hmax - dense <= 1e-6);
    }
}
