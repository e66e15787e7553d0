use thiserror::Error;

/// Errors raised by the invariant computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point is off the unit spheres: |x1|^2 = {norm1}, |x2|^2 = {norm2}")]
    OffSphere { norm1: f64, norm2: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The system fails to be semitoric: N x S and S x N are degenerate.
    #[error("degenerate system: E = {e} lies within the degeneracy band {band}")]
    Degenerate { e: f64, band: f64 },

    #[error("the requested quantity needs two focus-focus points, but E = {e} > 0")]
    NoFocusFocus { e: f64 },

    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate}, error {error}, worst interval [{worst_a}, {worst_b}])"
    )]
    Quadrature {
        subdivisions: usize,
        estimate: f64,
        error: f64,
        worst_a: f64,
        worst_b: f64,
    },

    #[error("closed-form branch mismatch: decomposed F = {decomposed}, arctan/log F = {arctan_log}")]
    BranchSelection { decomposed: f64, arctan_log: f64 },

    #[error("closed-form roots disagree with the numerical solver by {deviation}")]
    RootMismatch { deviation: f64 },

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
}

pub type Result<T> = std::result::Result<T, Error>;
