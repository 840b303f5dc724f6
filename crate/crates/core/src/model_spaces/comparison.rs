use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INEQUALITY_SLACK: f64 = 1e-12;

/// A point of the model surface `S_κ`.
///
/// For `κ = 0` the third coordinate is zero and the first two are planar.
/// For `κ < 0` the point lies on the unit hyperboloid `x² + y² - t² = -1`
/// and model distances are rescaled by `1/sqrt(-κ)`.
pub type ModelPoint = [f64; 3];

/// Triangle in `S_κ` with prescribed side lengths.
///
/// Side `i` runs from `vertices[i]` to `vertices[(i + 1) % 3]` and has length
/// `side_lengths[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTriangle {
    pub kappa: f64,
    pub side_lengths: [f64; 3],
    pub vertices: [ModelPoint; 3],
}

fn minkowski(u: &ModelPoint, v: &ModelPoint) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

/// Distance between two points of `S_κ`, `κ ≤ 0`.
pub fn model_distance(kappa: f64, p: &ModelPoint, q: &ModelPoint) -> f64 {
    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    if kappa == 0.0 {
        return d[0].hypot(d[1]);
    }
    let chord = minkowski(&d, &d).max(0.0).sqrt();
    2.0 * (0.5 * chord).asinh() / (-kappa).sqrt()
}

/// `sin²(γ/2)` for the angle between sides `a` and `b` opposite `c`, in the
/// half-angle form that stays accurate for thin triangles.
fn half_angle_sin_sq(kappa: f64, a: f64, b: f64, c: f64) -> f64 {
    let v = if kappa == 0.0 {
        (c - a + b) * (c + a - b) / (4.0 * a * b)
    } else {
        let mu = (-kappa).sqrt();
        let s = |x: f64| (0.5 * mu * x).sinh();
        // sinh((c-a+b)/2) sinh((c+a-b)/2) / (sinh a sinh b), in scaled units
        s(c - a + b) * s(c + a - b) / ((mu * a).sinh() * (mu * b).sinh())
    };
    v.clamp(0.0, 1.0)
}

/// Places a triangle with sides `a` (v0 to v1), `b` (v1 to v2) and `c`
/// (v2 to v0) in `S_κ`.
///
/// ```
/// use catfill::model_spaces::comparison_triangle;
///
/// let tri = comparison_triangle(0.0, 3.0, 4.0, 5.0).unwrap();
/// assert!((tri.angle_at(1) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
/// ```
pub fn comparison_triangle(kappa: f64, a: f64, b: f64, c: f64) -> Result<ComparisonTriangle> {
    if !(kappa <= 0.0) {
        return Err(Error::Validation(format!("comparison curvature must be <= 0, got {kappa}")));
    }
    let sides = [a, b, c];
    let longest = a.max(b).max(c);
    if sides.iter().any(|s| !(*s > 0.0) || !s.is_finite()) || a + b + c - 2.0 * longest < -INEQUALITY_SLACK * longest {
        return Err(Error::Degenerate(a, b, c));
    }
    let gamma = 2.0 * half_angle_sin_sq(kappa, a, b, c).sqrt().asin();
    let (sg, cg) = gamma.sin_cos();
    let vertices = if kappa == 0.0 {
        [[a, 0.0, 0.0], [0.0, 0.0, 0.0], [b * cg, b * sg, 0.0]]
    } else {
        let mu = (-kappa).sqrt();
        let (sa, ca) = ((mu * a).sinh(), (mu * a).cosh());
        let (sb, cb) = ((mu * b).sinh(), (mu * b).cosh());
        [[sa, 0.0, ca], [0.0, 0.0, 1.0], [sb * cg, sb * sg, cb]]
    };
    Ok(ComparisonTriangle { kappa, side_lengths: sides, vertices })
}

impl ComparisonTriangle {
    /// Interior angle at `vertices[i]`.
    pub fn angle_at(&self, i: usize) -> f64 {
        let [a, b, c] = self.side_lengths;
        // the two sides meeting at vertex i and the one opposite
        let (x, y, opp) = match i % 3 {
            0 => (c, a, b),
            1 => (a, b, c),
            _ => (b, c, a),
        };
        2.0 * half_angle_sin_sq(self.kappa, x, y, opp).sqrt().asin()
    }

    pub fn distance(&self, p: &ModelPoint, q: &ModelPoint) -> f64 {
        model_distance(self.kappa, p, q)
    }

    /// Point at `arclength` from the first vertex of side `side`.
    pub fn point(&self, side: usize, arclength: f64) -> Result<ModelPoint> {
        triangle_point(self, side, arclength)
    }
}

/// Point at the given arclength along side `side` of the triangle.
pub fn triangle_point(tri: &ComparisonTriangle, side: usize, arclength: f64) -> Result<ModelPoint> {
    let length = tri.side_lengths[side % 3];
    if !(arclength >= -1e-12 && arclength <= length * (1.0 + 1e-12) + 1e-12) {
        return Err(Error::OutOfRange { arclength, length });
    }
    let s = arclength.clamp(0.0, length);
    let p = tri.vertices[side % 3];
    let q = tri.vertices[(side + 1) % 3];
    if tri.kappa == 0.0 {
        let t = s / length;
        return Ok([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), 0.0]);
    }
    let mu = (-tri.kappa).sqrt();
    let l = mu * length;
    let (ch, sh) = (l.cosh(), l.sinh());
    let u: Vec<f64> = (0..3).map(|i| (q[i] - ch * p[i]) / sh).collect();
    let (cs, ss) = ((mu * s).cosh(), (mu * s).sinh());
    Ok([cs * p[0] + ss * u[0], cs * p[1] + ss * u[1], cs * p[2] + ss * u[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn vertex_distances_match_sides() {
        for kappa in [0.0, -1.0, -0.25, -4.0] {
            let tri = comparison_triangle(kappa, 1.3, 0.7, 1.1).unwrap();
            for i in 0..3 {
                let d = tri.distance(&tri.vertices[i], &tri.vertices[(i + 1) % 3]);
                assert!((d - tri.side_lengths[i]).abs() < 1e-12, "κ {kappa}, side {i}: {d}");
            }
        }
    }

    #[test]
    fn degenerate_triangle_is_straight() {
        let tri = comparison_triangle(-1.0, 1.0, 2.0, 3.0).unwrap();
        assert!((tri.angle_at(1) - PI).abs() < 1e-7);
        assert!(matches!(comparison_triangle(-1.0, 1.0, 1.0, 3.0), Err(Error::Degenerate(..))));
        assert!(comparison_triangle(0.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn endpoints_of_sides() {
        let tri = comparison_triangle(-1.0, 1.0, 1.5, 2.0).unwrap();
        for side in 0..3 {
            let p = tri.point(side, 0.0).unwrap();
            assert!(tri.distance(&p, &tri.vertices[side]) < 1e-12);
            let q = tri.point(side, tri.side_lengths[side]).unwrap();
            assert!(tri.distance(&q, &tri.vertices[(side + 1) % 3]) < 1e-10);
        }
        assert!(matches!(tri.point(0, 1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn hypotenuse_midpoint() {
        let tri = comparison_triangle(0.0, 3.0, 4.0, 5.0).unwrap();
        let m = tri.point(2, 2.5).unwrap();
        assert!((tri.distance(&m, &tri.vertices[2]) - 2.5).abs() < 1e-15);
        assert!((tri.distance(&m, &tri.vertices[0]) - 2.5).abs() < 1e-15);
    }
}
