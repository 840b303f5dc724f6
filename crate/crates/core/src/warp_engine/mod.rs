//! Doubly warped products `[r_min, r_max] ×_g E^k ×_f T`.
//!
//! Path lengths, a polyline geodesic solver, and directions at points of
//! the collapsed set `r = r_min` when `f(r_min) = 0`.

mod directions;
mod solver;
mod space;

pub use directions::{
    alexandrov_angle, cone_distance, direction_at_singular, distance_to_core, log_map, AngleEstimate, Direction,
    JoinDirection, LogImage, DEFAULT_SCALES,
};
pub use solver::{point_at_arclength, solve_geodesic, solve_geodesic_with, GeodesicResult, SolverConfig};
pub use space::{path_length, FgMember, FgRecipe, PolylinePath, WPoint, WarpSpec, WarpedSpace};
