//! Shared numerical kernels: quadrature, bracketed search and polynomial roots.

pub mod poly;
pub mod quadrature;
pub mod search;

pub use poly::{quartic_roots, Poly, QuarticRoots};
pub use quadrature::{integrate, EndpointMode, Quadrature, QuadratureSettings};
pub use search::{find_root_bisect, maximize_golden, minimize_golden, Extremum};
