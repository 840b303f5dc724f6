//! Smooth convex warping functions.
//!
//! The pair `(f, g)` produced by [`build_fg`] equals `(sinh, cosh)` near
//! `r = 0` and `e^(r-1)` past `1 + λ/2`. In between, each function follows
//! an elliptic arc tangent to the two end tangent lines ([`interpolate_tangent`]),
//! and the two corners are smoothed by second-derivative blending
//! ([`agol_smooth`]).

mod assembly;
mod ellipse;
mod piece;
mod smoothing;

use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub use assembly::{build_fg, sample_table, FgPair, Piece, SmoothWarpFunction, DEFAULT_DELTA0};
pub use ellipse::{interpolate_tangent, EllipseArc};
pub use piece::PieceKind;
pub use smoothing::{agol_smooth, Splice};

/// Which one-sided limit to take at a knot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    #[default]
    Right,
}

/// The line `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    /// Tangent line to a curve at `x` with the given value and slope there.
    pub fn tangent(x: f64, value: f64, slope: f64) -> Self {
        Self { slope, intercept: value - slope * x }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// Abscissa where the two lines meet (infinite for parallel lines).
    pub fn crossing(&self, other: &Line) -> f64 {
        (self.intercept - other.intercept) / (other.slope - self.slope)
    }
}

/// A real function of `r` with derivatives up to order two.
///
/// `side` only matters at knots of piecewise functions.
pub trait WarpFn: Send + Sync {
    fn eval(&self, r: f64, order: u8, side: Side) -> f64;

    fn value(&self, r: f64) -> f64 {
        self.eval(r, 0, Side::Right)
    }
}

/// Closed-form warping functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "analytic", rename_all = "snake_case")]
pub enum AnalyticWarp {
    Sinh,
    Cosh,
    /// `e^(rate * (r - shift))`
    ExpShift {
        #[serde(default)]
        shift: f64,
        #[serde(default = "one")]
        rate: f64,
    },
    /// `r`
    LinearR,
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl WarpFn for AnalyticWarp {
    fn eval(&self, r: f64, order: u8, _side: Side) -> f64 {
        match *self {
            AnalyticWarp::Sinh => match order {
                1 => r.cosh(),
                _ => r.sinh(),
            },
            AnalyticWarp::Cosh => match order {
                1 => r.sinh(),
                _ => r.cosh(),
            },
            AnalyticWarp::ExpShift { shift, rate } => rate.powi(order as i32) * (rate * (r - shift)).exp(),
            AnalyticWarp::LinearR => match order {
                0 => r,
                1 => 1.0,
                _ => 0.0,
            },
            AnalyticWarp::Constant { value } => {
                if order == 0 {
                    value
                } else {
                    0.0
                }
            }
        }
    }
}

/// A warping function handle: closed form or assembled piecewise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Warp {
    Analytic(AnalyticWarp),
    Smooth(Arc<SmoothWarpFunction>),
}

impl Warp {
    pub fn sinh() -> Self {
        Warp::Analytic(AnalyticWarp::Sinh)
    }

    pub fn cosh() -> Self {
        Warp::Analytic(AnalyticWarp::Cosh)
    }

    pub fn exp() -> Self {
        Warp::Analytic(AnalyticWarp::ExpShift { shift: 0.0, rate: 1.0 })
    }

    pub fn exp_rate(rate: f64) -> Self {
        Warp::Analytic(AnalyticWarp::ExpShift { shift: 0.0, rate })
    }

    pub fn linear() -> Self {
        Warp::Analytic(AnalyticWarp::LinearR)
    }

    pub fn constant(value: f64) -> Self {
        Warp::Analytic(AnalyticWarp::Constant { value })
    }

    pub fn smooth(f: SmoothWarpFunction) -> Self {
        Warp::Smooth(Arc::new(f))
    }

    /// The assembled function, when this is not a closed form.
    pub fn as_smooth(&self) -> Option<&SmoothWarpFunction> {
        match self {
            Warp::Smooth(s) => Some(s),
            Warp::Analytic(_) => None,
        }
    }
}

impl WarpFn for Warp {
    fn eval(&self, r: f64, order: u8, side: Side) -> f64 {
        match self {
            Warp::Analytic(a) => a.eval(r, order, side),
            Warp::Smooth(s) => s.eval_extended(r, order, side),
        }
    }
}

impl<F: Fn(f64, u8) -> f64 + Send + Sync> WarpFn for F {
    fn eval(&self, r: f64, order: u8, _side: Side) -> f64 {
        self(r, order)
    }
}
