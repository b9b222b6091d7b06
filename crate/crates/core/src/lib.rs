//! Align-Danzer point sets and the instruments that check them.
//!
//! Two constructions hit every axis-parallel box of a fixed volume:
//!
//! * [`vdc`]: the planar bit-reversal set `(±Σ a_n 2^n, ±Σ a_n 2^-n)`, with
//!   exact dyadic coordinates and a constructive hitting procedure.
//! * [`lattice`]: Minkowski embeddings of orders in totally real number
//!   fields, whose diagonal orbits stay bounded.
//!
//! [`verifier`] measures the largest empty aligned box of a finite sample
//! and counts growth; [`epsnet`] rescales either construction into an
//! ε-net for aligned boxes in the unit cube.

pub mod dyadic;
pub mod epsnet;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod verifier;
pub mod vdc;

pub use dyadic::DyadicRational;
pub use error::{Error, Result};
pub use geometry::{AlignedBox, Point, Scalar, Sign, Window};

/// Numerical tolerance for every floating-point assertion on lattice data.
pub const TOLERANCE: f64 = 1e-9;

/// Cap on points any single enumeration may return, overridable through the
/// `DANZER_MAX_POINTS` environment variable.
pub fn point_cap() -> usize {
    std::env::var("DANZER_MAX_POINTS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(20_000_000)
}
