use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fd::fd_sectional;
use super::terms::{sectional_terms, TERM_LABELS};
use crate::error::{Error, Result};
use crate::warp_engine::{WPoint, WarpedSpace};

pub const SPOT_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanGrid {
    pub points: usize,
    pub spot_checks: usize,
    pub seed: u64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { points: 1001, spot_checks: 10, seed: 42 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    /// Term values in label order; `None` where the term does not apply.
    pub terms: Vec<Option<f64>>,
    pub lower: f64,
    pub upper: f64,
    pub fd: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub r: f64,
    pub plane: (usize, usize),
    pub fd: f64,
    pub lower: f64,
    pub upper: f64,
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub euclid_dim: usize,
    pub torus_dim: usize,
    /// `[δ, r_max]`, where the upper curvature bound is reported.
    pub window: [f64; 2],
    pub empirical_kappa: f64,
    pub rows: Vec<ScanRow>,
    pub spot_checks: Vec<SpotCheck>,
    pub spots_inside: bool,
}

impl ScanReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r");
        for l in TERM_LABELS {
            out.push(',');
            out.push_str(l);
        }
        out.push_str(",lower,upper,fd\n");
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        for row in &self.rows {
            out.push_str(&format!("{:.17e}", row.r));
            for t in &row.terms {
                out.push(',');
                out.push_str(&cell(*t));
            }
            out.push_str(&format!(",{:.17e},{:.17e},{}\n", row.lower, row.upper, cell(row.fd)));
        }
        out
    }
}

/// Tabulates the curvature terms of a warped space over an r-grid, with
/// finite-difference spot checks at randomly chosen grid points.
pub fn curvature_scan(space: &WarpedSpace, grid: &ScanGrid) -> Result<ScanReport> {
    if grid.points < 2 {
        return Err(Error::Validation("scan grid needs at least two points".into()));
    }
    let (k, m) = (space.euclid_dim, space.torus_dim());
    let [lo, hi] = space.interval;
    let delta = space.warp_f.as_smooth().map_or(lo, |s| s.delta).max(lo);
    let mut rows = Vec::with_capacity(grid.points);
    for i in 0..grid.points {
        let r = lo + (hi - lo) * i as f64 / (grid.points - 1) as f64;
        if m > 0 && !(space.f(r, 0) > 0.0) {
            continue;
        }
        let st = sectional_terms(&space.warp_g, &space.warp_f, k, m, r)?;
        rows.push(ScanRow {
            r,
            terms: st.terms.iter().map(|t| t.applicable.then_some(t.value)).collect(),
            lower: st.lower,
            upper: st.upper,
            fd: None,
        });
    }
    let empirical_kappa = rows.iter().filter(|row| row.r >= delta).map(|row| -row.upper).fold(f64::INFINITY, f64::min);
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let n = space.chart_dim();
    let mut spot_checks = Vec::new();
    for _ in 0..grid.spot_checks.min(rows.len()) {
        let idx = rng.gen_range(0..rows.len());
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let row = &mut rows[idx];
        let point = WPoint::new(row.r, vec![0.0; k], vec![0.0; m]);
        let fd = fd_sectional(space, &point, (i.min(j), i.max(j)))?;
        row.fd = Some(fd);
        spot_checks.push(SpotCheck {
            r: row.r,
            plane: (i.min(j), i.max(j)),
            fd,
            lower: row.lower,
            upper: row.upper,
            inside: fd >= row.lower - SPOT_TOLERANCE && fd <= row.upper + SPOT_TOLERANCE,
        });
    }
    let spots_inside = spot_checks.iter().all(|s| s.inside);
    Ok(ScanReport { euclid_dim: k, torus_dim: m, window: [delta, hi], empirical_kappa, rows, spot_checks, spots_inside })
}
