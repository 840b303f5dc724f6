use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_spaces::comparison_triangle;
use crate::warp_engine::{point_at_arclength, solve_geodesic_with, GeodesicResult, SolverConfig, WPoint, WarpedSpace};

/// Violations up to this size are attributed to solver error.
pub const CAT_TOLERANCE: f64 = 2e-4;
pub const MIN_SIDE: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub triangle: [WPoint; 3],
    pub sides: (usize, usize),
    pub params: (f64, f64),
    pub d_space: f64,
    pub d_model: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub kappa: f64,
    pub triangles_tested: usize,
    /// `max(d_space - d_model)`; positive values violate the CAT(κ) inequality.
    pub max_violation: f64,
    pub worst_case: Option<WorstCase>,
    pub tolerance: f64,
    pub passed: bool,
}

impl ComparisonReport {
    fn empty(kappa: f64) -> Self {
        Self { kappa, triangles_tested: 0, max_violation: f64::NEG_INFINITY, worst_case: None, tolerance: CAT_TOLERANCE, passed: true }
    }

    fn absorb(&mut self, other: ComparisonReport) {
        self.triangles_tested += other.triangles_tested;
        if other.max_violation > self.max_violation {
            self.max_violation = other.max_violation;
            self.worst_case = other.worst_case;
        }
        self.passed = self.max_violation <= self.tolerance;
    }
}

/// Sides `[v0, v1]`, `[v1, v2]`, `[v2, v0]` of a geodesic triangle.
fn sides(space: &WarpedSpace, v: &[WPoint; 3], cfg: &SolverConfig) -> Result<[GeodesicResult; 3]> {
    let side = |i: usize| solve_geodesic_with(space, &v[i], &v[(i + 1) % 3], cfg);
    Ok([side(0)?, side(1)?, side(2)?])
}

/// Compares one geodesic triangle against its comparison triangles for
/// each curvature in `kappas`, sharing the sampled point pairs.
pub fn cat_test_multi(
    space: &WarpedSpace,
    vertices: &[WPoint; 3],
    kappas: &[f64],
    param_samples: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<Vec<ComparisonReport>> {
    let geo = sides(space, vertices, cfg)?;
    compare(space, vertices, &geo, kappas, param_samples, seed, cfg)
}

fn compare(
    space: &WarpedSpace,
    vertices: &[WPoint; 3],
    geo: &[GeodesicResult; 3],
    kappas: &[f64],
    param_samples: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<Vec<ComparisonReport>> {
    let lengths = [geo[0].distance, geo[1].distance, geo[2].distance];
    let triangles = kappas.iter().map(|&k| comparison_triangle(k, lengths[0], lengths[1], lengths[2])).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports: Vec<ComparisonReport> = kappas.iter().map(|&k| ComparisonReport::empty(k)).collect();
    for _ in 0..param_samples {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let (si, sj) = (rng.gen::<f64>() * lengths[i], rng.gen::<f64>() * lengths[j]);
        let x = point_at_arclength(space, &geo[i].path, si)?;
        let y = point_at_arclength(space, &geo[j].path, sj)?;
        let d_space = solve_geodesic_with(space, &x, &y, cfg)?.distance;
        for (tri, rep) in triangles.iter().zip(reports.iter_mut()) {
            let d_model = tri.distance(&tri.point(i, si)?, &tri.point(j, sj)?);
            let violation = d_space - d_model;
            if violation > rep.max_violation {
                rep.max_violation = violation;
                rep.worst_case = Some(WorstCase { triangle: vertices.clone(), sides: (i, j), params: (si, sj), d_space, d_model });
            }
        }
    }
    for rep in &mut reports {
        rep.triangles_tested = 1;
        rep.passed = rep.max_violation <= rep.tolerance;
    }
    Ok(reports)
}

/// CAT(κ) comparison for one triangle.
///
/// ```
/// use catfill::curvature_lab::cat_test;
/// use catfill::warp_engine::{SolverConfig, WPoint, WarpedSpace};
///
/// let flat = WarpedSpace::flat(-5.0, 5.0, 1).unwrap();
/// let tri = [
///     WPoint::new(0.0, vec![0.0], vec![]),
///     WPoint::new(1.0, vec![0.0], vec![]),
///     WPoint::new(0.5, vec![0.75f64.sqrt()], vec![]),
/// ];
/// let cfg = SolverConfig::default();
/// assert!(cat_test(&flat, &tri, 0.0, 10, 1, &cfg).unwrap().passed);
/// assert!(!cat_test(&flat, &tri, -1.0, 10, 1, &cfg).unwrap().passed);
/// ```
pub fn cat_test(
    space: &WarpedSpace,
    vertices: &[WPoint; 3],
    kappa: f64,
    param_samples: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<ComparisonReport> {
    Ok(cat_test_multi(space, vertices, &[kappa], param_samples, seed, cfg)?.remove(0))
}

/// Axis-aligned box of chart coordinates `(r, e, θ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ChartBox {
    pub fn sample(&self, space: &WarpedSpace, rng: &mut ChaCha8Rng) -> WPoint {
        let x: Vec<f64> = self.lower.iter().zip(&self.upper).map(|(a, b)| a + (b - a) * rng.gen::<f64>()).collect();
        WPoint::new(x[0], x[1..1 + space.euclid_dim].to_vec(), x[1 + space.euclid_dim..].to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub reports: Vec<ComparisonReport>,
    pub rejected: usize,
    /// Every per-triangle report, in sampling order, one row per κ.
    pub per_triangle: Vec<Vec<ComparisonReport>>,
}

/// Runs `cat_test_multi` on `triangles` random triangles with vertices in
/// `chart_box`, rejecting triangles with a side shorter than `MIN_SIDE`
/// or with a degenerate comparison triangle.
pub fn cat_campaign(
    space: &WarpedSpace,
    chart_box: &ChartBox,
    triangles: usize,
    kappas: &[f64],
    param_samples: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<CampaignReport> {
    if chart_box.lower.len() != space.chart_dim() || chart_box.upper.len() != space.chart_dim() {
        return Err(Error::Validation(format!("chart box needs {} coordinates", space.chart_dim())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports: Vec<ComparisonReport> = kappas.iter().map(|&k| ComparisonReport::empty(k)).collect();
    let mut per_triangle = Vec::with_capacity(triangles);
    let mut rejected = 0;
    let max_attempts = 20 * triangles.max(1);
    let mut attempts = 0;
    while per_triangle.len() < triangles {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Validation(format!("only {} usable triangles after {max_attempts} draws", per_triangle.len())));
        }
        let v = [chart_box.sample(space, &mut rng), chart_box.sample(space, &mut rng), chart_box.sample(space, &mut rng)];
        let geo = sides(space, &v, cfg)?;
        let lengths = [geo[0].distance, geo[1].distance, geo[2].distance];
        if lengths.iter().any(|l| *l < MIN_SIDE) || comparison_triangle(0.0, lengths[0], lengths[1], lengths[2]).is_err() {
            rejected += 1;
            continue;
        }
        let reps = compare(space, &v, &geo, kappas, param_samples, rng.gen(), cfg)?;
        for (acc, r) in reports.iter_mut().zip(&reps) {
            acc.absorb(r.clone());
        }
        per_triangle.push(reps);
    }
    Ok(CampaignReport { reports, rejected, per_triangle })
}
