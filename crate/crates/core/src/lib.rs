pub mod error;
pub mod quadrature;
pub mod model_spaces;
pub mod warp_functions;
pub mod warp_engine;
pub mod curvature_lab;
pub mod filling_topology;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/warp_functions.md")]
    mod warp_functions {}
    #[doc = include_str!("../../../book/src/warped_spaces.md")]
    mod warped_spaces {}
    #[doc = include_str!("../../../book/src/singular_set.md")]
    mod singular_set {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/filling_topology.md")]
    mod filling_topology {}
}
