//! Lattices from totally real polynomials: roots, embedding bases, point
//! enumeration, diagonal-flow probes and sampled covering radii.

pub mod basis;
pub mod covering;
pub mod field;
pub mod flow;
pub mod poly;
pub mod reduce;

pub use basis::{build_basis, enumerate_lattice, hit_box_lattice, LatticeBasis, LatticePoint};
pub use covering::{covering_profile, covering_radius_estimate, danzer_constant_estimate, CoveringProfile};
pub use field::{build_field, preset_field, Preset, TotallyRealField};
pub use flow::{
    apply_flow, flow_grid, norm_product, shortest_vector_under_flow, shortest_vector_with_coeffs,
    DiagonalFlowVector,
};
pub use poly::IntPoly;
