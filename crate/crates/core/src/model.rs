//! Phase space `S^2 x S^2`, the momentum map `(L, H)`, Poisson brackets for
//! `omega = -(R1 omega_S2 + R2 omega_S2)` and the discrete symmetries Psi_1..Psi_5.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on `|x_i|^2 - 1` when a point is handed to the library.
pub const SPHERE_TOL: f64 = 1e-9;

/// Central finite-difference step for gradients.
pub const FD_STEP: f64 = 1e-6;

/// The two geometric weights and the two coupling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    r1: f64,
    r2: f64,
    s1: f64,
    s2: f64,
}

impl ModelParams {
    pub fn new(r1: f64, r2: f64, s1: f64, s2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1.is_finite() && r2 > 0.0 && r2.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "R1 and R2 must be positive and finite, got R1 = {r1}, R2 = {r2}"
            )));
        }
        if r1 == r2 {
            return Err(Error::InvalidParams(
                "R1 = R2 gives a non-simple system and is not supported".into(),
            ));
        }
        for (name, s) in [("s1", s1), ("s2", s2)] {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::InvalidParams(format!("{name} = {s} is outside [0, 1]")));
            }
        }
        Ok(Self { r1, r2, s1, s2 })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    /// `R = R2 / R1`.
    pub fn ratio(&self) -> f64 {
        self.r2 / self.r1
    }

    /// `s1 + s2 - s1^2 - s2^2`, half the coefficient of the coupling term.
    pub fn coupling(&self) -> f64 {
        self.s1 + self.s2 - self.s1 * self.s1 - self.s2 * self.s2
    }

    pub fn t_params(&self) -> TParams {
        let a = 1.0 - 2.0 * self.s1;
        TParams {
            t1: a * (1.0 - self.s2),
            t2: a * self.s2,
            t3: 2.0 * self.coupling(),
            t4: 0.0,
        }
    }

    /// The parameters after Psi_3 (swap the spheres): `(R2, R1, s1, 1 - s2)`.
    pub fn swapped(&self) -> Self {
        Self {
            r1: self.r2,
            r2: self.r1,
            s1: self.s1,
            s2: 1.0 - self.s2,
        }
    }
}

/// Coefficients of `H = t1 z1 + t2 z2 + t3 (x1 x2 + y1 y2) + t4 z1 z2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TParams {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
}

/// Cartesian point on `S^2 x S^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x1: f64,
    pub y1: f64,
    pub z1: f64,
    pub x2: f64,
    pub y2: f64,
    pub z2: f64,
}

impl PhasePoint {
    pub fn new(x1: f64, y1: f64, z1: f64, x2: f64, y2: f64, z2: f64) -> Result<Self> {
        let p = Self { x1, y1, z1, x2, y2, z2 };
        p.validate()?;
        Ok(p)
    }

    pub fn from_array(c: [f64; 6]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.x1, self.y1, self.z1, self.x2, self.y2, self.z2]
    }

    /// Point with cylindrical coordinates `(theta_i, z_i)` on each sphere.
    pub fn from_cylindrical(theta1: f64, z1: f64, theta2: f64, z2: f64) -> Result<Self> {
        if z1.abs() > 1.0 || z2.abs() > 1.0 {
            return Err(Error::Domain(format!("heights z1 = {z1}, z2 = {z2} outside [-1, 1]")));
        }
        let rho1 = (1.0 - z1 * z1).sqrt();
        let rho2 = (1.0 - z2 * z2).sqrt();
        Self::new(
            rho1 * theta1.cos(),
            rho1 * theta1.sin(),
            z1,
            rho2 * theta2.cos(),
            rho2 * theta2.sin(),
            z2,
        )
    }

    pub fn sphere_norms(&self) -> (f64, f64) {
        (
            self.x1 * self.x1 + self.y1 * self.y1 + self.z1 * self.z1,
            self.x2 * self.x2 + self.y2 * self.y2 + self.z2 * self.z2,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let (norm1, norm2) = self.sphere_norms();
        if (norm1 - 1.0).abs() > SPHERE_TOL || (norm2 - 1.0).abs() > SPHERE_TOL {
            return Err(Error::OffSphere { norm1, norm2 });
        }
        Ok(())
    }

    fn normalized(c: [f64; 6]) -> Self {
        let n1 = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        let n2 = (c[3] * c[3] + c[4] * c[4] + c[5] * c[5]).sqrt();
        Self {
            x1: c[0] / n1,
            y1: c[1] / n1,
            z1: c[2] / n1,
            x2: c[3] / n2,
            y2: c[4] / n2,
            z2: c[5] / n2,
        }
    }
}

/// The four rank-0 points: products of poles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointId {
    NN,
    NS,
    SN,
    SS,
}

impl PointId {
    pub const ALL: [PointId; 4] = [PointId::NN, PointId::NS, PointId::SN, PointId::SS];

    pub fn phase_point(self) -> PhasePoint {
        let (z1, z2) = match self {
            PointId::NN => (1.0, 1.0),
            PointId::NS => (1.0, -1.0),
            PointId::SN => (-1.0, 1.0),
            PointId::SS => (-1.0, -1.0),
        };
        PhasePoint {
            x1: 0.0,
            y1: 0.0,
            z1,
            x2: 0.0,
            y2: 0.0,
            z2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PointId::NN => "NN",
            PointId::NS => "NS",
            PointId::SN => "SN",
            PointId::SS => "SS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumValue {
    pub l_val: f64,
    pub h_val: f64,
}

fn l_raw(c: &[f64; 6], params: &ModelParams) -> f64 {
    params.r1 * c[2] + params.r2 * c[5]
}

fn h_raw(c: &[f64; 6], params: &ModelParams) -> f64 {
    let t = params.t_params();
    t.t1 * c[2] + t.t2 * c[5] + t.t3 * (c[0] * c[3] + c[1] * c[4])
}

pub fn momentum_map(p: &PhasePoint, params: &ModelParams) -> Result<MomentumValue> {
    p.validate()?;
    let c = p.to_array();
    Ok(MomentumValue {
        l_val: l_raw(&c, params),
        h_val: h_raw(&c, params),
    })
}

/// A smooth function on a neighbourhood of `S^2 x S^2` in `R^6`.
///
/// The default gradient is a central difference with step [`FD_STEP`].
/// Brackets only see the tangential part of the gradient, so any smooth
/// extension off the spheres will do.
pub trait Observable {
    fn value(&self, c: &[f64; 6]) -> f64;

    fn gradient(&self, c: &[f64; 6]) -> [f64; 6] {
        central_gradient(|x| self.value(x), c)
    }
}

impl<F: Fn(&[f64; 6]) -> f64> Observable for F {
    fn value(&self, c: &[f64; 6]) -> f64 {
        self(c)
    }
}

pub fn central_gradient<F: Fn(&[f64; 6]) -> f64>(f: F, c: &[f64; 6]) -> [f64; 6] {
    let mut g = [0.0; 6];
    for k in 0..6 {
        let mut plus = *c;
        let mut minus = *c;
        plus[k] += FD_STEP;
        minus[k] -= FD_STEP;
        g[k] = (f(&plus) - f(&minus)) / (2.0 * FD_STEP);
    }
    g
}

/// `L` with its analytic gradient.
#[derive(Debug, Clone, Copy)]
pub struct LObservable(pub ModelParams);

impl Observable for LObservable {
    fn value(&self, c: &[f64; 6]) -> f64 {
        l_raw(c, &self.0)
    }

    fn gradient(&self, _c: &[f64; 6]) -> [f64; 6] {
        [0.0, 0.0, self.0.r1, 0.0, 0.0, self.0.r2]
    }
}

/// `H` with its analytic gradient.
#[derive(Debug, Clone, Copy)]
pub struct HObservable(pub ModelParams);

impl Observable for HObservable {
    fn value(&self, c: &[f64; 6]) -> f64 {
        h_raw(c, &self.0)
    }

    fn gradient(&self, c: &[f64; 6]) -> [f64; 6] {
        let t = self.0.t_params();
        [t.t3 * c[3], t.t3 * c[4], t.t1, t.t3 * c[0], t.t3 * c[1], t.t2]
    }
}

/// Wraps an observable so that its gradient is always taken by finite differences.
#[derive(Debug, Clone, Copy)]
pub struct FiniteDifference<O>(pub O);

impl<O: Observable> Observable for FiniteDifference<O> {
    fn value(&self, c: &[f64; 6]) -> f64 {
        self.0.value(c)
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn split(c: &[f64; 6]) -> ([f64; 3], [f64; 3]) {
    ([c[0], c[1], c[2]], [c[3], c[4], c[5]])
}

/// `{f, g} = omega(X_f, X_g)` with `omega(X_f, .) = -df`.
///
/// On a unit sphere with its area form this is `x . (grad f x grad g)`; the
/// weight `-R_i` divides each factor's contribution.
pub fn poisson_bracket<F, G>(f: &F, g: &G, p: &PhasePoint, params: &ModelParams) -> Result<f64>
where
    F: Observable + ?Sized,
    G: Observable + ?Sized,
{
    p.validate()?;
    let c = p.to_array();
    let (x1, x2) = split(&c);
    let (df1, df2) = split(&f.gradient(&c));
    let (dg1, dg2) = split(&g.gradient(&c));
    Ok(-dot(x1, cross(df1, dg1)) / params.r1 - dot(x2, cross(df2, dg2)) / params.r2)
}

/// Hamiltonian vector field of `f`: `dx_i/dt = (1/R_i) x_i x grad_i f`, so
/// that `dg/dt = {g, f}`.
pub fn hamiltonian_vector_field<F>(f: &F, c: &[f64; 6], params: &ModelParams) -> [f64; 6]
where
    F: Observable + ?Sized,
{
    let (x1, x2) = split(c);
    let (d1, d2) = split(&f.gradient(c));
    let v1 = cross(x1, d1);
    let v2 = cross(x2, d2);
    [
        v1[0] / params.r1,
        v1[1] / params.r1,
        v1[2] / params.r1,
        v2[0] / params.r2,
        v2[1] / params.r2,
        v2[2] / params.r2,
    ]
}

/// Integrates the Hamiltonian flow of `f` for `time` with `steps` classical
/// RK4 steps, projecting back to the spheres after each step.
pub fn hamiltonian_flow<F>(
    f: &F,
    p: &PhasePoint,
    params: &ModelParams,
    time: f64,
    steps: usize,
) -> Result<PhasePoint>
where
    F: Observable + ?Sized,
{
    p.validate()?;
    if steps == 0 {
        return Err(Error::Domain("flow needs at least one step".into()));
    }
    let dt = time / steps as f64;
    let axpy = |x: &[f64; 6], k: &[f64; 6], h: f64| -> [f64; 6] {
        let mut out = *x;
        for i in 0..6 {
            out[i] += h * k[i];
        }
        out
    };
    let mut c = p.to_array();
    for _ in 0..steps {
        let k1 = hamiltonian_vector_field(f, &c, params);
        let k2 = hamiltonian_vector_field(f, &axpy(&c, &k1, 0.5 * dt), params);
        let k3 = hamiltonian_vector_field(f, &axpy(&c, &k2, 0.5 * dt), params);
        let k4 = hamiltonian_vector_field(f, &axpy(&c, &k3, dt), params);
        for i in 0..6 {
            c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        c = PhasePoint::normalized(c).to_array();
    }
    Ok(PhasePoint::normalized(c))
}

/// The discrete symmetries Psi_1..Psi_5 acting on points and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    /// Rotation by pi about both vertical axes.
    Psi1,
    /// Flip both spheres, `s1 -> 1 - s1`; reverses `L`.
    Psi2,
    /// Swap the spheres, `(R1, R2, s2) -> (R2, R1, 1 - s2)`.
    Psi3,
    /// Rotate the first sphere by pi, `s1 -> 1 - s1`; reverses `H`.
    Psi4,
    /// `s2 -> 1 - s2`, only at `s1 = 1/2`.
    Psi5,
}

impl Symmetry {
    pub const ALL: [Symmetry; 5] = [
        Symmetry::Psi1,
        Symmetry::Psi2,
        Symmetry::Psi3,
        Symmetry::Psi4,
        Symmetry::Psi5,
    ];

    /// Signs `(a, b)` with `(L, H) o Psi = (a L, b H)`.
    pub fn pullback_signs(self) -> (f64, f64) {
        match self {
            Symmetry::Psi2 => (-1.0, 1.0),
            Symmetry::Psi4 => (1.0, -1.0),
            _ => (1.0, 1.0),
        }
    }
}

impl TryFrom<u8> for Symmetry {
    type Error = Error;

    fn try_from(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Symmetry::Psi1),
            2 => Ok(Symmetry::Psi2),
            3 => Ok(Symmetry::Psi3),
            4 => Ok(Symmetry::Psi4),
            5 => Ok(Symmetry::Psi5),
            _ => Err(Error::Domain(format!("symmetry index {i} is not in 1..=5"))),
        }
    }
}

/// `|s1 - 1/2|` below this counts as `s1 = 1/2`.
pub const HALF_TOL: f64 = 1e-12;

pub fn apply_symmetry(
    sym: Symmetry,
    p: &PhasePoint,
    params: &ModelParams,
) -> Result<(PhasePoint, ModelParams)> {
    p.validate()?;
    let PhasePoint { x1, y1, z1, x2, y2, z2 } = *p;
    let ModelParams { r1, r2, s1, s2 } = *params;
    let (q, np) = match sym {
        Symmetry::Psi1 => ([-x1, -y1, z1, -x2, -y2, z2], (r1, r2, s1, s2)),
        Symmetry::Psi2 => ([x1, -y1, -z1, x2, -y2, -z2], (r1, r2, 1.0 - s1, s2)),
        Symmetry::Psi3 => ([x2, y2, z2, x1, y1, z1], (r2, r1, s1, 1.0 - s2)),
        Symmetry::Psi4 => ([-x1, -y1, z1, x2, y2, z2], (r1, r2, 1.0 - s1, s2)),
        Symmetry::Psi5 => {
            if (s1 - 0.5).abs() > HALF_TOL {
                return Err(Error::Domain(format!("Psi_5 is only defined at s1 = 1/2, got {s1}")));
            }
            ([x1, y1, z1, x2, y2, z2], (r1, r2, s1, 1.0 - s2))
        }
    };
    Ok((
        PhasePoint::from_array(q)?,
        ModelParams::new(np.0, np.1, np.2, np.3)?,
    ))
}
