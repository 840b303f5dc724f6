use serde::{Deserialize, Serialize};

use super::Line;
use crate::error::{Error, Result};

const GRID: usize = 1000;
const FLOOR_SAFETY: f64 = 0.9;

/// Convex arc of an ellipse tangent to two lines at the ends of `[a, b]`.
///
/// The ellipse is the image of the circle `(u-1)^2 + (v-1)^2 = 1` under the
/// affine map `(u, v) -> P + u (Q_b - P) + v (Q_a - P)`, where `P` is the
/// crossing of the two lines, `Q_a = (a, l1(a))` and `Q_b = (b, l2(b))`.
/// The arc is the quarter of that circle nearest the origin, mapped forward.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipseArc {
    /// Rows `[m11, m12, tx]` and `[m21, m22, ty]`.
    pub affine_map: [[f64; 3]; 2],
    pub domain: [f64; 2],
    pub convexity_floor: f64,
    pub l1: Line,
    pub l2: Line,
}

/// Builds the elliptic interpolant between `l1` at `a` and `l2` at `b`.
pub fn interpolate_tangent(l1: Line, l2: Line, a: f64, b: f64) -> Result<EllipseArc> {
    if !(l1.slope < l2.slope) {
        return Err(Error::SlopeOrder { first: l1.slope, second: l2.slope });
    }
    let crossing = l1.crossing(&l2);
    if !(a < crossing && crossing < b) {
        return Err(Error::IntersectionOutside { crossing, a, b });
    }
    let p = (crossing, l1.at(crossing));
    let qa = (a, l1.at(a));
    let qb = (b, l2.at(b));
    let mut arc = EllipseArc {
        affine_map: [[qb.0 - p.0, qa.0 - p.0, p.0], [qb.1 - p.1, qa.1 - p.1, p.1]],
        domain: [a, b],
        convexity_floor: 0.0,
        l1,
        l2,
    };

    // x must increase along the arc so it is the graph of a function
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let s = std::f64::consts::PI * (1.0 + 0.5 * i as f64 / GRID as f64);
        let x = arc.param_point(s).0;
        if x <= prev {
            return Err(Error::Validation(format!("elliptic arc is not a graph near x = {x}")));
        }
        prev = x;
    }

    let min_curv = (0..=GRID)
        .map(|i| arc.eval(a + (b - a) * i as f64 / GRID as f64, 2))
        .fold(f64::INFINITY, f64::min);
    if !(min_curv > 0.0) {
        return Err(Error::Validation(format!("elliptic arc is not strictly convex (min second derivative {min_curv})")));
    }
    arc.convexity_floor = FLOOR_SAFETY * min_curv;
    Ok(arc)
}

impl EllipseArc {
    fn param_point(&self, s: f64) -> (f64, f64) {
        let [[m11, m12, tx], [m21, m22, ty]] = self.affine_map;
        let (u, v) = (1.0 + s.cos(), 1.0 + s.sin());
        (m11 * u + m12 * v + tx, m21 * u + m22 * v + ty)
    }

    /// Evaluates the arc (or its continuation along the same branch of the
    /// ellipse) at abscissa `x`.
    pub fn eval(&self, x: f64, order: u8) -> f64 {
        let [[m11, m12, tx], [m21, m22, ty]] = self.affine_map;
        // x(s) = x0 + R cos(s - phi), increasing for s - phi in (-pi, 0)
        let x0 = tx + m11 + m12;
        let radius = m11.hypot(m12);
        let phi = m12.atan2(m11);
        let s = phi - ((x - x0) / radius).clamp(-1.0, 1.0).acos();
        let (sn, cs) = s.sin_cos();
        if order == 0 {
            return m21 * (1.0 + cs) + m22 * (1.0 + sn) + ty;
        }
        let xp = -m11 * sn + m12 * cs;
        let yp = -m21 * sn + m22 * cs;
        if order == 1 {
            return yp / xp;
        }
        let xpp = -m11 * cs - m12 * sn;
        let ypp = -m21 * cs - m22 * sn;
        (xp * ypp - yp * xpp) / xp.powi(3)
    }
}
