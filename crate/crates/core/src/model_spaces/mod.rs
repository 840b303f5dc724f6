//! Closed-form model geometries used as oracles.
//!
//! The hyperbolic half-plane, comparison triangles in the model surfaces
//! `S_κ` for `κ ≤ 0`, flat tori given by lattices, and the spherical join.

mod comparison;
mod halfplane;
mod join;
mod lattice;

pub use comparison::{comparison_triangle, model_distance, triangle_point, ComparisonTriangle, ModelPoint};
pub use halfplane::{halfplane_distance, horo_to_halfplane, strip_to_halfplane};
pub use join::{circle_distance, spherical_join_distance, truncated, JoinPoint};
pub use lattice::{for_each_in_box, torus_distance, torus_systole, LatticeTorus};
