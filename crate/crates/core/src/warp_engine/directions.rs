use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use super::solver::{point_at_arclength, solve_geodesic_with, SolverConfig};
use super::space::{WPoint, WarpedSpace};
use crate::error::{Error, Result};
use crate::model_spaces::{spherical_join_distance, JoinPoint};

pub const DEFAULT_SCALES: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Distance from `p` to the level set `r = r_min`, realised by the radial path.
pub fn distance_to_core(space: &WarpedSpace, p: &WPoint) -> f64 {
    p.r - space.r_min()
}

/// A direction at a point of the collapsed set, as a point `(φ, α, θ)` of
/// the join of the unit sphere in `E^k` with the torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinDirection {
    pub phi: f64,
    pub alpha: Option<Vec<f64>>,
    pub theta: Vec<f64>,
}

/// Direction at `(0, a0)` of the geodesic towards `target = (t₁, a₁, θ₁)`
/// in `[0, ∞) ×_cosh E^k ×_sinh T`.
///
/// ```
/// use catfill::model_spaces::LatticeTorus;
/// use catfill::warp_engine::{direction_at_singular, WPoint, WarpedSpace};
///
/// let s = WarpedSpace::standard_singular(5.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
/// let dir = direction_at_singular(&s, &[0.0], &WPoint::new(1.0, vec![1.0], vec![2.0])).unwrap();
/// assert!((dir.phi - (1f64.tanh() / 1f64.sinh()).atan()).abs() < 1e-12);
/// assert_eq!(dir.alpha, Some(vec![1.0]));
/// ```
pub fn direction_at_singular(space: &WarpedSpace, a0: &[f64], target: &WPoint) -> Result<JoinDirection> {
    if !space.is_standard_singular() {
        return Err(Error::Validation("closed-form directions need [0, r] x_cosh E^k x_sinh T".into()));
    }
    space.check_point(target)?;
    if a0.len() != space.euclid_dim {
        return Err(Error::Validation(format!("a0 has length {}, expected {}", a0.len(), space.euclid_dim)));
    }
    let diff: Vec<f64> = target.e.iter().zip(a0).map(|(a, b)| a - b).collect();
    let s = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    if s == 0.0 {
        return Ok(JoinDirection { phi: FRAC_PI_2, alpha: None, theta: target.theta.clone() });
    }
    Ok(JoinDirection {
        phi: (target.r.tanh() / s.sinh()).atan(),
        alpha: Some(diff.iter().map(|v| v / s).collect()),
        theta: target.theta.clone(),
    })
}

impl JoinDirection {
    /// Angle between two directions in the join metric.
    pub fn angle(&self, other: &Self, space: &WarpedSpace) -> f64 {
        let p = JoinPoint { phi: self.phi, a_point: self.alpha.clone(), b_point: self.theta.clone() };
        let q = JoinPoint { phi: other.phi, a_point: other.alpha.clone(), b_point: other.theta.clone() };
        let sphere = |a: &Option<Vec<f64>>, b: &Option<Vec<f64>>| match (a, b) {
            (Some(a), Some(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().clamp(-1.0, 1.0).acos(),
            _ => 0.0,
        };
        let torus = |a: &Vec<f64>, b: &Vec<f64>| space.torus.as_ref().map_or(0.0, |t| t.distance(a, b));
        spherical_join_distance(&p, &q, sphere, torus)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimate {
    pub angle: f64,
    /// `(t, comparison angle)` for each scale.
    pub samples: Vec<(f64, f64)>,
    /// Comparison angles do not increase as `t` decreases.
    pub monotone: bool,
    /// Spread between the last two extrapolants.
    pub error_estimate: f64,
}

/// Alexandrov angle at `p` between the geodesics to `q1` and `q2`, from
/// Euclidean comparison angles at the given arclengths, extrapolated to
/// `t = 0` assuming an error of order `t²`.
pub fn alexandrov_angle(
    space: &WarpedSpace,
    p: &WPoint,
    q1: &WPoint,
    q2: &WPoint,
    scales: &[f64],
    cfg: &SolverConfig,
) -> Result<AngleEstimate> {
    if scales.is_empty() || scales.iter().any(|t| !(*t > 0.0)) || scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Validation("scales must be positive and strictly decreasing".into()));
    }
    let g1 = solve_geodesic_with(space, p, q1, cfg)?;
    let g2 = solve_geodesic_with(space, p, q2, cfg)?;
    if g1.distance == 0.0 || g2.distance == 0.0 {
        return Err(Error::Validation("angle needs q1 and q2 distinct from p".into()));
    }
    let mut samples = Vec::with_capacity(scales.len());
    for &t in scales {
        let x1 = point_at_arclength(space, &g1.path, t.min(g1.distance))?;
        let x2 = point_at_arclength(space, &g2.path, t.min(g2.distance))?;
        let (t1, t2) = (t.min(g1.distance), t.min(g2.distance));
        let d = solve_geodesic_with(space, &x1, &x2, cfg)?.distance;
        let c = (t1 * t1 + t2 * t2 - d * d) / (2.0 * t1 * t2);
        samples.push((t, c.clamp(-1.0, 1.0).acos()));
    }
    let monotone = samples.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9);
    let extrapolants: Vec<f64> = samples
        .windows(2)
        .map(|w| {
            let ratio = (w[0].0 / w[1].0).powi(2);
            (ratio * w[1].1 - w[0].1) / (ratio - 1.0)
        })
        .collect();
    let (angle, error_estimate) = match extrapolants.as_slice() {
        [] => (samples[0].1, f64::NAN),
        [only] => (*only, (only - samples[1].1).abs()),
        [.., a, b] => (*b, (b - a).abs()),
    };
    Ok(AngleEstimate { angle: angle.clamp(0.0, std::f64::consts::PI), samples, monotone, error_estimate })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Direction {
    Join(JoinDirection),
    /// Unit chart tangent `(r', e', θ')` in the metric at the base point.
    Tangent { components: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogImage {
    pub radius: f64,
    pub direction: Option<Direction>,
}

/// `log_p(x)`: distance to `x` and the direction of the geodesic at `p`.
pub fn log_map(space: &WarpedSpace, p: &WPoint, x: &WPoint, cfg: &SolverConfig) -> Result<LogImage> {
    let res = solve_geodesic_with(space, p, x, cfg)?;
    if res.distance == 0.0 {
        return Ok(LogImage { radius: 0.0, direction: None });
    }
    if space.on_core(p) {
        let dir = direction_at_singular(space, &p.e, x)?;
        return Ok(LogImage { radius: res.distance, direction: Some(Direction::Join(dir)) });
    }
    let cover = space.lift(&res.path)?;
    let step = cover
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect::<Vec<f64>>())
        .find(|d| d.iter().any(|v| *v != 0.0))
        .ok_or_else(|| Error::SolverFailure("geodesic has no nondegenerate segment".into()))?;
    let norm = space.norm_sq(p.r, &step).sqrt();
    Ok(LogImage {
        radius: res.distance,
        direction: Some(Direction::Tangent { components: step.iter().map(|v| v / norm).collect() }),
    })
}

/// Distance between two log images in the tangent cone at `p`.
pub fn cone_distance(space: &WarpedSpace, p: &WPoint, a: &LogImage, b: &LogImage) -> f64 {
    let angle = match (&a.direction, &b.direction) {
        (Some(Direction::Join(u)), Some(Direction::Join(v))) => u.angle(v, space),
        (Some(Direction::Tangent { components: u }), Some(Direction::Tangent { components: v })) => {
            let diff: Vec<f64> = u.iter().zip(v).map(|(x, y)| x - y).collect();
            let chord = space.norm_sq(p.r, &diff).sqrt();
            2.0 * (0.5 * chord).clamp(-1.0, 1.0).asin()
        }
        _ => 0.0,
    };
    (a.radius * a.radius + b.radius * b.radius - 2.0 * a.radius * b.radius * angle.cos()).max(0.0).sqrt()
}
