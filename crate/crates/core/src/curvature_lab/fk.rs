use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: f64 = 0.1;
/// Margin for closed-form samples.
pub const EXACT_MARGIN: f64 = 1e-9;
/// Margin for samples taken along solver geodesics.
pub const SOLVER_MARGIN: f64 = 1e-4;
const STORED_VIOLATIONS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FKReport {
    #[serde(rename = "K")]
    pub k: f64,
    pub window: f64,
    pub margin: f64,
    pub pairs_checked: usize,
    pub violation_count: usize,
    /// Largest `u(t) - s(t)` over all interior comparisons.
    pub max_deficit: f64,
    /// The first violations found, in sample order.
    pub violations: Vec<Violation>,
    pub passed: bool,
}

/// Solution of `s'' + K s = 0` with `s(a) = ua`, `s(b) = ub`, evaluated at `t`.
pub fn fk_solution(k: f64, (a, ua): (f64, f64), (b, ub): (f64, f64), t: f64) -> f64 {
    let basis = |x: f64| -> f64 {
        if k < 0.0 {
            ((-k).sqrt() * x).sinh()
        } else if k > 0.0 {
            (k.sqrt() * x).sin()
        } else {
            x
        }
    };
    (ua * basis(b - t) + ub * basis(t - a)) / basis(b - a)
}

/// Checks `u'' + K u ≥ 0` in the barrier sense on sampled values.
///
/// For every pair of samples at most `window` apart, `u` must stay below
/// the `𝓕K` solution through the pair at all samples in between.
///
/// ```
/// use catfill::curvature_lab::fk_convexity;
///
/// let samples: Vec<(f64, f64)> = (0..=100).map(|i| {
///     let t = 0.1 + i as f64 * 0.03;
///     (t, t.sin())
/// }).collect();
/// let report = fk_convexity(&samples, -1.0, 0.1, 1e-9).unwrap();
/// assert!(!report.passed && report.max_deficit > 0.0);
/// ```
pub fn fk_convexity(samples: &[(f64, f64)], k: f64, window: f64, margin: f64) -> Result<FKReport> {
    if samples.len() < 3 {
        return Err(Error::Validation("need at least three samples".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::Validation("sample parameters must increase strictly".into()));
    }
    let gap = samples.windows(2).map(|w| w[1].0 - w[0].0).fold(0.0, f64::max);
    if !(window > gap) {
        return Err(Error::WindowTooSmall { window, gap });
    }
    if k > 0.0 && k.sqrt() * window >= std::f64::consts::PI {
        return Err(Error::Validation(format!("window {window} reaches a conjugate point for K = {k}")));
    }
    let mut report = FKReport {
        k,
        window,
        margin,
        pairs_checked: 0,
        violation_count: 0,
        max_deficit: f64::NEG_INFINITY,
        violations: Vec::new(),
        passed: true,
    };
    for i in 0..samples.len() {
        for j in i + 2..samples.len() {
            let (a, b) = (samples[i], samples[j]);
            if b.0 - a.0 > window {
                break;
            }
            report.pairs_checked += 1;
            for &(t, u) in &samples[i + 1..j] {
                let deficit = u - fk_solution(k, a, b, t);
                report.max_deficit = report.max_deficit.max(deficit);
                if deficit > margin {
                    report.violation_count += 1;
                    if report.violations.len() < STORED_VIOLATIONS {
                        report.violations.push(Violation { a: a.0, b: b.0, t, deficit });
                    }
                }
            }
        }
    }
    report.passed = report.violation_count == 0;
    Ok(report)
}
