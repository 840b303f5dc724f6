use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_spaces::LatticeTorus;
use crate::quadrature;
use crate::warp_functions::{build_fg, AnalyticWarp, Side, Warp, WarpFn};

const SINGULAR_TOL: f64 = 1e-12;
const VALIDATION_SAMPLES: usize = 1000;
const LENGTH_REL_TOL: f64 = 1e-10;

/// Which member of the pair a `build_fg` recipe selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FgMember {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgRecipe {
    pub lambda: f64,
    #[serde(default)]
    pub delta0: Option<f64>,
    pub which: FgMember,
}

/// A warp as written in a space document: a closed form, an assembled
/// function, or a `build_fg` recipe to be evaluated on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WarpSpec {
    Recipe { build_fg: FgRecipe },
    Warp(Warp),
}

impl WarpSpec {
    pub fn resolve(self) -> Result<Warp> {
        match self {
            WarpSpec::Warp(w) => Ok(w),
            WarpSpec::Recipe { build_fg: r } => {
                let fg = build_fg(r.lambda, r.delta0)?;
                Ok(Warp::smooth(match r.which {
                    FgMember::F => fg.f,
                    FgMember::G => fg.g,
                }))
            }
        }
    }
}

#[derive(Deserialize)]
struct RawSpace {
    interval: [f64; 2],
    euclid_dim: usize,
    warp_g: WarpSpec,
    #[serde(default)]
    torus: Option<LatticeTorus>,
    #[serde(default)]
    warp_f: Option<WarpSpec>,
}

/// `[r_min, r_max] ×_g E^k ×_f T`.
///
/// Chart coordinates of a point are `(r, e, θ)` with `e ∈ ℝ^k` and `θ` a
/// Euclidean coordinate on the universal cover of the torus `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct WarpedSpace {
    pub interval: [f64; 2],
    pub euclid_dim: usize,
    pub warp_g: Warp,
    pub torus: Option<LatticeTorus>,
    pub warp_f: Warp,
    #[serde(skip_serializing)]
    singular_at_zero: bool,
}

impl TryFrom<RawSpace> for WarpedSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        let warp_f = match raw.warp_f {
            Some(w) => w.resolve()?,
            None if raw.torus.is_none() => Warp::constant(1.0),
            None => return Err(Error::Validation("warp_f is required when a torus is present".into())),
        };
        Self::new(raw.interval, raw.euclid_dim, raw.warp_g.resolve()?, raw.torus, warp_f)
    }
}

/// A point in chart coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WPoint {
    pub r: f64,
    #[serde(default)]
    pub e: Vec<f64>,
    #[serde(default)]
    pub theta: Vec<f64>,
}

impl WPoint {
    pub fn new(r: f64, e: Vec<f64>, theta: Vec<f64>) -> Self {
        Self { r, e, theta }
    }

    /// Flat coordinate vector `(r, e, θ)`.
    pub fn coords(&self) -> Vec<f64> {
        std::iter::once(self.r).chain(self.e.iter().copied()).chain(self.theta.iter().copied()).collect()
    }

    pub(crate) fn from_coords(x: &[f64], k: usize) -> Self {
        Self { r: x[0], e: x[1..1 + k].to_vec(), theta: x[1 + k..].to_vec() }
    }
}

/// Polyline in chart coordinates.
///
/// Vertices carry fundamental-domain torus coordinates; segment `j` runs from
/// `vertices[j]` to `vertices[j + 1]` translated by the lattice vector with
/// coefficients `deck_shifts[j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolylinePath {
    pub vertices: Vec<WPoint>,
    pub deck_shifts: Vec<Vec<i64>>,
}

impl WarpedSpace {
    pub fn new(interval: [f64; 2], euclid_dim: usize, warp_g: Warp, torus: Option<LatticeTorus>, warp_f: Warp) -> Result<Self> {
        let [lo, hi] = interval;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Validation(format!("interval [{lo}, {hi}] is empty or unbounded")));
        }
        for i in 0..=VALIDATION_SAMPLES {
            let r = lo + (hi - lo) * i as f64 / VALIDATION_SAMPLES as f64;
            let g = warp_g.value(r);
            if !(g > 0.0) {
                return Err(Error::NonpositiveWarp { t: r });
            }
            if torus.is_some() && i > 0 && i < VALIDATION_SAMPLES && !(warp_f.value(r) > 0.0) {
                return Err(Error::NonpositiveWarp { t: r });
            }
        }
        let singular_at_zero = if torus.is_some() {
            let f0 = warp_f.value(lo);
            if f0 < -SINGULAR_TOL || !(warp_f.value(hi) > 0.0) {
                return Err(Error::NonpositiveWarp { t: if f0 < 0.0 { lo } else { hi } });
            }
            f0.abs() <= SINGULAR_TOL
        } else {
            false
        };
        Ok(Self { interval, euclid_dim, warp_g, torus, warp_f, singular_at_zero })
    }

    /// `[0, r_max] ×_cosh E^k ×_sinh T`.
    pub fn standard_singular(r_max: f64, euclid_dim: usize, torus: LatticeTorus) -> Result<Self> {
        Self::new([0.0, r_max], euclid_dim, Warp::cosh(), Some(torus), Warp::sinh())
    }

    /// `[lo, hi] ×_{e^r} E^k`, a horoball chart of hyperbolic space.
    pub fn hyperbolic(lo: f64, hi: f64, euclid_dim: usize) -> Result<Self> {
        Self::new([lo, hi], euclid_dim, Warp::exp(), None, Warp::constant(1.0))
    }

    /// `[lo, hi] × E^k` with the product metric.
    pub fn flat(lo: f64, hi: f64, euclid_dim: usize) -> Result<Self> {
        Self::new([lo, hi], euclid_dim, Warp::constant(1.0), None, Warp::constant(1.0))
    }

    /// Space from a `build_fg` pair: `[0, 1+λ] ×_g E^k ×_f T`.
    pub fn from_fg(lambda: f64, delta0: Option<f64>, euclid_dim: usize, torus: LatticeTorus) -> Result<Self> {
        let fg = build_fg(lambda, delta0)?;
        Self::new([0.0, 1.0 + lambda], euclid_dim, Warp::smooth(fg.g), Some(torus), Warp::smooth(fg.f))
    }

    pub fn singular_at_zero(&self) -> bool {
        self.singular_at_zero
    }

    /// Whether this is exactly `[0, ·] ×_cosh E^k ×_sinh T`.
    pub fn is_standard_singular(&self) -> bool {
        self.interval[0] == 0.0
            && self.torus.is_some()
            && self.warp_g == Warp::Analytic(AnalyticWarp::Cosh)
            && self.warp_f == Warp::Analytic(AnalyticWarp::Sinh)
    }

    pub fn r_min(&self) -> f64 {
        self.interval[0]
    }

    pub fn r_max(&self) -> f64 {
        self.interval[1]
    }

    pub fn torus_dim(&self) -> usize {
        self.torus.as_ref().map_or(0, |t| t.dim())
    }

    /// Number of chart coordinates `1 + k + dim T`.
    pub fn chart_dim(&self) -> usize {
        1 + self.euclid_dim + self.torus_dim()
    }

    pub fn g(&self, r: f64, order: u8) -> f64 {
        self.warp_g.eval(r, order, Side::Right)
    }

    pub fn f(&self, r: f64, order: u8) -> f64 {
        if self.torus.is_none() {
            return if order == 0 { 1.0 } else { 0.0 };
        }
        self.warp_f.eval(r, order, Side::Right)
    }

    /// On the collapsed set `r = r_min` of a singular space.
    pub fn on_core(&self, p: &WPoint) -> bool {
        self.singular_at_zero && p.r <= self.r_min()
    }

    pub fn check_point(&self, p: &WPoint) -> Result<()> {
        if p.e.len() != self.euclid_dim || p.theta.len() != self.torus_dim() {
            return Err(Error::Validation(format!(
                "point has {} euclidean and {} torus coordinates, space expects {} and {}",
                p.e.len(),
                p.theta.len(),
                self.euclid_dim,
                self.torus_dim()
            )));
        }
        let [lo, hi] = self.interval;
        if !(p.r >= lo && p.r <= hi) || p.coords().iter().any(|v| !v.is_finite()) {
            return Err(Error::OutOfDomain { r: p.r, lo, hi });
        }
        Ok(())
    }

    /// Parses `r,e_1,..,e_k,θ_1,..,θ_m`.
    pub fn parse_point(&self, text: &str) -> Result<WPoint> {
        let values: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Validation(format!("not a number: {s:?}"))))
            .collect::<Result<_>>()?;
        if values.len() != self.chart_dim() {
            return Err(Error::Validation(format!("expected {} coordinates, got {}", self.chart_dim(), values.len())));
        }
        let p = WPoint::from_coords(&values, self.euclid_dim);
        self.check_point(&p)?;
        Ok(p)
    }

    /// Point equality in the quotient: torus coordinates are ignored on the
    /// collapsed set and compared modulo the lattice elsewhere.
    pub fn same_point(&self, p: &WPoint, q: &WPoint, tol: f64) -> bool {
        if (p.r - q.r).abs() > tol || p.e.iter().zip(&q.e).any(|(a, b)| (a - b).abs() > tol) {
            return false;
        }
        if self.on_core(p) && self.on_core(q) {
            return true;
        }
        match &self.torus {
            Some(t) => t.distance(&p.theta, &q.theta) <= tol,
            None => true,
        }
    }

    /// Representative with torus coordinates in the fundamental domain.
    pub fn reduce(&self, p: &WPoint) -> WPoint {
        match &self.torus {
            Some(t) => WPoint { theta: t.reduce(&p.theta), ..p.clone() },
            None => p.clone(),
        }
    }

    /// Squared metric norm of a chart displacement at radius `r`.
    pub fn norm_sq(&self, r: f64, d: &[f64]) -> f64 {
        let k = self.euclid_dim;
        let de: f64 = d[1..1 + k].iter().map(|v| v * v).sum();
        let dt: f64 = d[1 + k..].iter().map(|v| v * v).sum();
        d[0] * d[0] + self.g(r, 0).powi(2) * de + self.f(r, 0).powi(2) * dt
    }

    /// Length of the straight chart segment between two cover points.
    pub fn segment_length(&self, a: &[f64], b: &[f64]) -> f64 {
        let k = self.euclid_dim;
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let de: f64 = d[1..1 + k].iter().map(|v| v * v).sum();
        let dt: f64 = d[1 + k..].iter().map(|v| v * v).sum();
        if de == 0.0 && dt == 0.0 {
            return d[0].abs();
        }
        let speed = |s: f64| {
            let r = a[0] + s * d[0];
            (d[0] * d[0] + self.g(r, 0).powi(2) * de + self.f(r, 0).powi(2) * dt).max(0.0).sqrt()
        };
        if d[0] == 0.0 {
            return speed(0.0);
        }
        quadrature::integrate(speed, 0.0, 1.0, LENGTH_REL_TOL, 1e-300)
    }

    /// Cover coordinates of the path vertices, starting from the first one.
    pub fn lift(&self, path: &PolylinePath) -> Result<Vec<Vec<f64>>> {
        let m = self.torus_dim();
        if path.vertices.is_empty() || path.deck_shifts.len() + 1 != path.vertices.len() {
            return Err(Error::Validation("path needs one deck shift per segment".into()));
        }
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(path.vertices.len());
        let mut offset = vec![0i64; m];
        for (j, v) in path.vertices.iter().enumerate() {
            self.check_point(v)?;
            if j > 0 {
                let s = &path.deck_shifts[j - 1];
                if s.len() != m {
                    return Err(Error::Validation(format!("deck shift {} has length {}, expected {m}", j - 1, s.len())));
                }
                for (o, c) in offset.iter_mut().zip(s) {
                    *o += c;
                }
            }
            let mut x = v.coords();
            if let Some(t) = &self.torus {
                let tr = t.translation(&offset);
                for (i, dv) in tr.iter().enumerate() {
                    x[1 + self.euclid_dim + i] += dv;
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    /// Reduces cover coordinates to a path with fundamental-domain vertices.
    pub(crate) fn unlift(&self, cover: &[Vec<f64>]) -> PolylinePath {
        let k = self.euclid_dim;
        let mut vertices = Vec::with_capacity(cover.len());
        let mut offsets: Vec<Vec<i64>> = Vec::with_capacity(cover.len());
        for x in cover {
            let p = WPoint::from_coords(x, k);
            match &self.torus {
                Some(t) => {
                    let c: Vec<i64> = t.coefficients(&p.theta).iter().map(|c| c.floor() as i64).collect();
                    let tr = t.translation(&c);
                    let theta = p.theta.iter().zip(&tr).map(|(a, b)| a - b).collect();
                    vertices.push(WPoint { theta, ..p });
                    offsets.push(c);
                }
                None => {
                    vertices.push(p);
                    offsets.push(Vec::new());
                }
            }
        }
        let deck_shifts = offsets.windows(2).map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect()).collect();
        PolylinePath { vertices, deck_shifts }
    }
}

/// Length of a polyline path in the warped metric.
///
/// ```
/// use catfill::warp_engine::{path_length, PolylinePath, WPoint, WarpedSpace};
///
/// let h2 = WarpedSpace::hyperbolic(-5.0, 5.0, 1).unwrap();
/// let path = PolylinePath {
///     vertices: vec![WPoint::new(1.0, vec![0.0], vec![]), WPoint::new(1.0, vec![2.0], vec![])],
///     deck_shifts: vec![vec![]],
/// };
/// let l = path_length(&h2, &path).unwrap();
/// assert!((l - 2.0 * 1f64.exp()).abs() < 1e-12);
/// ```
pub fn path_length(space: &WarpedSpace, path: &PolylinePath) -> Result<f64> {
    let cover = space.lift(path)?;
    Ok(cover.windows(2).map(|w| space.segment_length(&w[0], &w[1])).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle_space() -> WarpedSpace {
        let circle = LatticeTorus::new(vec![vec![2.0 * PI]]).unwrap();
        WarpedSpace::new([0.0, 5.0], 0, Warp::constant(1.0), Some(circle), Warp::linear()).unwrap()
    }

    #[test]
    fn json_schema_with_recipe() {
        let s: WarpedSpace = serde_json::from_str(
            r#"{"interval":[0, 2.6], "euclid_dim":1,
                "warp_g":{"build_fg":{"lambda":1.6,"which":"g"}},
                "torus":{"dim":1,"basis":[[7.0]]},
                "warp_f":{"build_fg":{"lambda":1.6,"delta0":0.2,"which":"f"}}}"#,
        )
        .unwrap();
        assert!(s.singular_at_zero());
        assert!((s.f(2.6, 0) - 1.6f64.exp()).abs() < 1e-12);
        let s: WarpedSpace = serde_json::from_str(
            r#"{"interval":[0, 3], "euclid_dim":1, "warp_g":{"analytic":"cosh"}, "torus":null}"#,
        )
        .unwrap();
        assert!(!s.singular_at_zero());
        assert!(serde_json::from_str::<WarpedSpace>(
            r#"{"interval":[-1, 3], "euclid_dim":0, "warp_g":{"analytic":"cosh"}, "torus":{"dim":1,"basis":[[1]]}, "warp_f":{"analytic":"sinh"}}"#
        )
        .is_err());
    }

    #[test]
    fn radial_segment() {
        let s = WarpedSpace::standard_singular(3.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
        let path = PolylinePath {
            vertices: vec![WPoint::new(0.2, vec![0.5], vec![1.0]), WPoint::new(1.7, vec![0.5], vec![1.0])],
            deck_shifts: vec![vec![0]],
        };
        assert_eq!(path_length(&s, &path).unwrap(), 1.5);
    }

    #[test]
    fn circle_of_radius_r() {
        let s = circle_space();
        let r = 1.3;
        // once around: one segment back to the same reduced point, shifted by one period
        let path = PolylinePath {
            vertices: vec![WPoint::new(r, vec![], vec![0.0]), WPoint::new(r, vec![], vec![0.0])],
            deck_shifts: vec![vec![1]],
        };
        assert!((path_length(&s, &path).unwrap() - 2.0 * PI * r).abs() < 1e-12);
    }

    #[test]
    fn lift_and_unlift_round_trip() {
        let s = circle_space();
        let cover = vec![vec![1.0, 6.0], vec![1.2, 7.0], vec![1.4, -0.5]];
        let path = s.unlift(&cover);
        assert_eq!(path.deck_shifts, vec![vec![1], vec![-2]]);
        let back = s.lift(&path).unwrap();
        for (a, b) in back.iter().zip(&cover) {
            assert!((a[1] - b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn quotient_equality() {
        let s = WarpedSpace::standard_singular(3.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
        let p = WPoint::new(0.0, vec![1.0], vec![2.0]);
        let q = WPoint::new(0.0, vec![1.0], vec![5.0]);
        assert!(s.same_point(&p, &q, 1e-12));
        let p = WPoint::new(0.5, vec![1.0], vec![0.5]);
        let q = WPoint::new(0.5, vec![1.0], vec![7.5]);
        assert!(s.same_point(&p, &q, 1e-12));
        assert!(!s.same_point(&p, &WPoint::new(0.5, vec![1.0], vec![1.5]), 1e-12));
    }

    #[test]
    fn point_parsing() {
        let s = WarpedSpace::standard_singular(3.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
        assert_eq!(s.parse_point("0.5, 1, 2").unwrap(), WPoint::new(0.5, vec![1.0], vec![2.0]));
        assert!(s.parse_point("0.5,1").is_err());
        assert!(matches!(s.parse_point("4,0,0"), Err(Error::OutOfDomain { .. })));
    }
}
