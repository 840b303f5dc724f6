use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::warp_functions::{Side, WarpFn};

pub const TERM_LABELS: [&str; 5] = ["-f1''/f1", "-f2''/f2", "-(f1')^2/f1^2", "-(f2')^2/f2^2", "-f1'f2'/(f1f2)"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
    pub applicable: bool,
}

/// Curvature terms of `I ×_{f1} A₁ ×_{f2} A₂` at `t`, with flat fibres
/// `A₁`, `A₂` of the given dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionalTerms {
    pub t: f64,
    pub terms: Vec<Term>,
    pub lower: f64,
    pub upper: f64,
}

impl SectionalTerms {
    pub fn applicable_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().filter(|t| t.applicable).map(|t| t.value)
    }
}

/// Evaluates the five curvature terms and the interval they span.
///
/// A factor of dimension one has no `-(f')²/f²` term; a factor of
/// dimension zero contributes nothing.
///
/// ```
/// use catfill::curvature_lab::sectional_terms;
/// use catfill::warp_functions::Warp;
///
/// let s = sectional_terms(&Warp::cosh(), &Warp::sinh(), 1, 1, 0.5).unwrap();
/// assert!((s.lower + 1.0).abs() < 1e-15 && (s.upper + 1.0).abs() < 1e-15);
/// ```
pub fn sectional_terms(f1: &dyn WarpFn, f2: &dyn WarpFn, dim1: usize, dim2: usize, t: f64) -> Result<SectionalTerms> {
    let d = |f: &dyn WarpFn, o| f.eval(t, o, Side::Right);
    let (a, a1, a2) = (d(f1, 0), d(f1, 1), d(f1, 2));
    let (b, b1, b2) = (d(f2, 0), d(f2, 1), d(f2, 2));
    if dim1 > 0 && !(a > 0.0) || dim2 > 0 && !(b > 0.0) {
        return Err(Error::NonpositiveWarp { t });
    }
    let values = [-a2 / a, -b2 / b, -(a1 * a1) / (a * a), -(b1 * b1) / (b * b), -(a1 * b1) / (a * b)];
    let applicable = [dim1 >= 1, dim2 >= 1, dim1 >= 2, dim2 >= 2, dim1 >= 1 && dim2 >= 1];
    let terms: Vec<Term> = TERM_LABELS
        .iter()
        .zip(values)
        .zip(applicable)
        .map(|((label, value), applicable)| Term { label: label.to_string(), value, applicable })
        .collect();
    let (lower, upper) = terms
        .iter()
        .filter(|t| t.applicable)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t.value), hi.max(t.value)));
    if lower > upper {
        return Err(Error::Empty);
    }
    Ok(SectionalTerms { t, terms, lower, upper })
}
