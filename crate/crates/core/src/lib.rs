//! Symplectic invariants of the four-parameter family of semitoric systems
//! on `S^2 x S^2` with momentum map
//!
//! ```text
//! L = R1 z1 + R2 z2
//! H = (1 - 2 s1)(1 - s2) z1 + (1 - 2 s1) s2 z2 + 2 (s1 + s2 - s1^2 - s2^2)(x1 x2 + y1 y2)
//! ```
//!
//! The crate computes the number of focus-focus points, polygon-invariant
//! representatives and the height invariant, and carries independent numerical
//! oracles for each closed-form expression.

pub mod cartography;
pub mod error;
pub mod height;
pub mod model;
pub mod numerics;
pub mod reduced;
pub mod singularity;

pub use error::{Error, Result};
