use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{agol_smooth, interpolate_tangent, Line, PieceKind, Side, WarpFn};
use crate::error::{Error, Result};

pub const DEFAULT_DELTA0: f64 = 0.2;
const FORMAT_VERSION: u32 = 1;
const BISECTION_RESOLUTION: f64 = 1e-9;
const SPLICE_FRACTION: f64 = 0.05;
const FLOOR_GRID_STEP: f64 = 1e-4;
const FLOOR_SAFETY: f64 = 0.9;
const CROSSING_MARGIN: f64 = 0.05;

/// A piece together with the closed interval where it applies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub piece: PieceKind,
}

/// Piecewise-analytic warping function on `[0, 1 + lambda]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothWarpFunction {
    pub version: u32,
    pub pieces: Vec<Piece>,
    pub knots: Vec<f64>,
    pub lambda: f64,
    pub delta: f64,
    pub delta0: f64,
    #[serde(alias = "convexity_floor")]
    pub kappa_floor: f64,
}

impl SmoothWarpFunction {
    pub fn domain(&self) -> (f64, f64) {
        (self.pieces[0].start, self.pieces[self.pieces.len() - 1].end)
    }

    fn locate(&self, r: f64, side: Side) -> usize {
        let last = self.pieces.len() - 1;
        for (i, p) in self.pieces.iter().enumerate() {
            let inside = match side {
                Side::Left => r <= p.end,
                Side::Right => r < p.end,
            };
            if inside {
                // a left limit at the very start belongs to the first piece
                return i;
            }
        }
        last
    }

    /// Evaluates the function or one of its first two derivatives.
    ///
    /// At a knot, `side` selects the piece ending (`Left`) or starting
    /// (`Right`) there.
    pub fn eval(&self, r: f64, order: u8, side: Side) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(r >= lo - 1e-12 && r <= hi + 1e-12) || order > 2 {
            return Err(Error::OutOfDomain { r, lo, hi });
        }
        Ok(self.eval_extended(r, order, side))
    }

    /// Like [`Self::eval`] but continues the end pieces analytically outside
    /// the domain.
    pub fn eval_extended(&self, r: f64, order: u8, side: Side) -> f64 {
        self.pieces[self.locate(r, side)].piece.eval(r, order)
    }

    /// Kind of the piece used at `r` from the right.
    pub fn piece_at(&self, r: f64) -> &PieceKind {
        &self.pieces[self.locate(r, Side::Right)].piece
    }

    /// Largest one-sided mismatch of value and slope over all knots.
    pub fn knot_mismatch(&self) -> f64 {
        self.knots
            .iter()
            .flat_map(|&t| {
                (0..2u8).map(move |k| (self.eval_extended(t, k, Side::Left) - self.eval_extended(t, k, Side::Right)).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Minimum over a uniform grid of the one-sided second derivatives.
    pub fn grid_min_second(&self, from: f64, to: f64, step: f64) -> f64 {
        let n = ((to - from) / step).round() as usize;
        (0..=n)
            .map(|i| {
                let r = from + (to - from) * i as f64 / n as f64;
                self.eval_extended(r, 2, Side::Left).min(self.eval_extended(r, 2, Side::Right))
            })
            .fold(f64::INFINITY, f64::min)
    }
}

impl WarpFn for SmoothWarpFunction {
    fn eval(&self, r: f64, order: u8, side: Side) -> f64 {
        self.eval_extended(r, order, side)
    }
}

/// The warping pair produced by [`build_fg`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgPair {
    pub f: SmoothWarpFunction,
    pub g: SmoothWarpFunction,
    pub delta: f64,
    pub delta0: f64,
    pub kappa_floor: f64,
}

fn exp_tangent(lambda: f64) -> Line {
    let knot = 1.0 + 0.5 * lambda;
    let v = (0.5 * lambda).exp();
    Line::tangent(knot, v, v)
}

fn start_tangents(d0: f64) -> [Line; 2] {
    [Line::tangent(d0, d0.sinh(), d0.cosh()), Line::tangent(d0, d0.cosh(), d0.sinh())]
}

/// Both tangent lines at `d0` have a smaller slope than the tail tangent and
/// meet it inside `(d0, 1 + λ/2)`, at least a small multiple of `λ` away
/// from either end.
fn tangents_meet_inside(d0: f64, lambda: f64) -> bool {
    let tail = exp_tangent(lambda);
    let knot = 1.0 + 0.5 * lambda;
    let margin = CROSSING_MARGIN * (knot - d0).min(0.5 * lambda);
    d0 > 0.0
        && d0 < knot
        && start_tangents(d0).iter().all(|l| {
            let x = l.crossing(&tail);
            l.slope < tail.slope && x > d0 + margin && x < knot - margin
        })
}

fn select_delta0(lambda: f64, hint: f64) -> Result<f64> {
    if tangents_meet_inside(hint, lambda) {
        return Ok(hint);
    }
    let (mut lo, mut hi) = (0.0, hint);
    while hi - lo > BISECTION_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if tangents_meet_inside(mid, lambda) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::Validation(format!("no admissible delta0 below {hint} for lambda {lambda}")));
    }
    Ok(lo)
}

fn assemble(head: PieceKind, start: Line, d0: f64, lambda: f64, eps: f64) -> Result<SmoothWarpFunction> {
    let knot = 1.0 + 0.5 * lambda;
    let end = 1.0 + lambda;
    let arc = PieceKind::EllipseArc(interpolate_tangent(start, exp_tangent(lambda), d0, knot)?);
    let tail = PieceKind::ExpShift { c: 1.0 };
    let first = agol_smooth(head.clone(), arc.clone(), d0, eps)?;
    let second = agol_smooth(arc.clone(), tail.clone(), knot, eps)?;
    let pieces = vec![
        Piece { start: 0.0, end: d0 - eps, piece: head },
        Piece { start: d0 - eps, end: d0, piece: PieceKind::MollifiedSplice(first) },
        Piece { start: d0, end: knot - eps, piece: arc },
        Piece { start: knot - eps, end: knot, piece: PieceKind::MollifiedSplice(second) },
        Piece { start: knot, end, piece: tail },
    ];
    let mut out = SmoothWarpFunction {
        version: FORMAT_VERSION,
        knots: pieces[1..].iter().map(|p| p.start).collect(),
        pieces,
        lambda,
        delta: d0 - eps,
        delta0: d0,
        kappa_floor: 0.0,
    };
    let from = FLOOR_GRID_STEP;
    out.kappa_floor = FLOOR_SAFETY * out.grid_min_second(from, end, FLOOR_GRID_STEP).min(1.0 / FLOOR_SAFETY);
    Ok(out)
}

/// Builds the warping pair `(f, g)` for the given `lambda`.
///
/// `f = sinh` and `g = cosh` below `delta`, both equal `e^(r-1)` from
/// `1 + lambda/2` on, and `g'' >= kappa_floor > 0` throughout. The start
/// knot `delta0` is the hint itself when admissible, otherwise the largest
/// admissible value below it found by bisection.
///
/// ```
/// use catfill::warp_functions::{build_fg, Side};
///
/// let fg = build_fg(1.6, Some(0.2)).unwrap();
/// assert!(fg.kappa_floor > 0.0);
/// let v = fg.f.eval(2.6, 0, Side::Left).unwrap();
/// assert!((v - 1.6f64.exp()).abs() < 1e-12);
/// ```
pub fn build_fg(lambda: f64, delta0_hint: Option<f64>) -> Result<FgPair> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Validation(format!("lambda must be positive, got {lambda}")));
    }
    let hint = delta0_hint.unwrap_or(DEFAULT_DELTA0);
    if !(hint > 0.0) {
        return Err(Error::Validation(format!("delta0 hint must be positive, got {hint}")));
    }
    let d0 = select_delta0(lambda, hint)?;
    let eps = SPLICE_FRACTION * d0.min(0.5 * lambda);
    let [sinh_line, cosh_line] = start_tangents(d0);
    let f = assemble(PieceKind::Sinh, sinh_line, d0, lambda, eps)?;
    let mut g = assemble(PieceKind::Cosh, cosh_line, d0, lambda, eps)?;
    // f'' vanishes at 0, so its floor is not meaningful there; g's is the reported one
    g.kappa_floor = g.kappa_floor.min(FLOOR_SAFETY * g.grid_min_second(0.0, 1.0 + lambda, FLOOR_GRID_STEP));
    if !(f.kappa_floor > 0.0 && g.kappa_floor > 0.0) {
        return Err(Error::Validation(format!(
            "lambda {lambda} too small: assembled warps lose convexity (floors {:.3e}, {:.3e})",
            f.kappa_floor, g.kappa_floor
        )));
    }
    Ok(FgPair { delta: f.delta, delta0: d0, kappa_floor: g.kappa_floor, f, g })
}

/// Plot table with columns `r, f, f', f'', g, g', g''` on `n + 1` points.
pub fn sample_table(f: &SmoothWarpFunction, g: &SmoothWarpFunction, n: usize) -> String {
    let (lo, hi) = f.domain();
    let mut out = String::from("r,f,df,d2f,g,dg,d2g\n");
    for i in 0..=n {
        let r = lo + (hi - lo) * i as f64 / n as f64;
        let row: Vec<String> = std::iter::once(r)
            .chain((0..3).map(|k| f.eval_extended(r, k, Side::Right)))
            .chain((0..3).map(|k| g.eval_extended(r, k, Side::Right)))
            .map(|v| format!("{v:.12e}"))
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

impl FgPair {
    pub fn sample_table(&self, n: usize) -> String {
        sample_table(&self.f, &self.g, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hint_accepted_for_reference_parameters() {
        let fg = build_fg(1.6, Some(0.2)).unwrap();
        assert_eq!(fg.delta0, 0.2);
        assert!(fg.delta < fg.delta0);
        let kinds: Vec<_> = fg.f.pieces.iter().map(|p| p.piece.kind_name()).collect();
        assert_eq!(kinds, ["sinh", "mollified_splice", "ellipse_arc", "mollified_splice", "exp_shift"]);
        assert_eq!(fg.f.pieces[4].start, 1.8);
        assert_eq!(fg.f.pieces[4].end, 2.6);
    }

    #[test]
    fn tiny_lambda_forces_bisection() {
        // the sinh tangent at 0.2 meets the tail too close to 1 + λ/2
        let fg = build_fg(0.1, Some(0.2)).unwrap();
        assert!(fg.delta0 < 0.2);
        assert!(tangents_meet_inside(fg.delta0, 0.1));
        assert!(fg.f.knot_mismatch() < 1e-8);
        assert!(fg.kappa_floor > 0.0);
    }

    #[test]
    fn tail_and_head_are_exact() {
        let fg = build_fg(1.6, None).unwrap();
        let r = 1.0 + 0.8 + 0.1;
        assert_eq!(fg.f.eval(r, 0, Side::Right).unwrap(), (0.8f64 + 0.1).exp());
        assert_eq!(fg.g.eval(0.0, 1, Side::Right).unwrap(), 0.0);
        assert_eq!(fg.f.eval(0.0, 0, Side::Right).unwrap(), 0.0);
        assert!(matches!(fg.f.eval(2.7, 0, Side::Right), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn degenerate_lambda_is_rejected() {
        assert!(build_fg(0.001, None).is_err());
        assert!(build_fg(0.0, None).is_err());
        assert!(build_fg(1.6, Some(-0.1)).is_err());
    }

    #[test]
    fn json_round_trip_preserves_evaluation() {
        let fg = build_fg(1.6, None).unwrap();
        let text = serde_json::to_string(&fg.g).unwrap();
        for key in ["\"pieces\"", "\"knots\"", "\"lambda\"", "\"delta\"", "\"delta0\"", "\"kappa_floor\""] {
            assert!(text.contains(key), "{key}");
        }
        let back: SmoothWarpFunction = serde_json::from_str(&text).unwrap();
        for r in [0.1, 0.195, 0.5, 1.79, 2.2] {
            assert_eq!(back.eval(r, 0, Side::Right).unwrap(), fg.g.eval(r, 0, Side::Right).unwrap());
        }
    }

    #[test]
    fn table_has_header_and_rows() {
        let fg = build_fg(1.6, None).unwrap();
        let t = fg.sample_table(10);
        assert!(t.starts_with("r,f,df,d2f,g,dg,d2g\n"));
        assert_eq!(t.lines().count(), 12);
    }
}
