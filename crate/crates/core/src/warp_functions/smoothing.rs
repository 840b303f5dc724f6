use serde::{Deserialize, Serialize};

use super::PieceKind;
use crate::error::{Error, Result};
use crate::quadrature;

const MATCH_TOL: f64 = 1e-9;
const BOUND_SLACK: f64 = 0.1;
const CHECK_GRID: usize = 2000;
const INITIAL_STEP_FRACTION: f64 = 0.25;
const MIN_STEP_FRACTION: f64 = 1e-6;

/// A `C^∞` splice of two pieces that agree to first order at `knot`.
///
/// On the window `[knot - width, knot]` the second derivative is
///
/// ```text
/// a''(r) = b''(r) + S(s) (c''(r) - b''(r)) + w1 β1(s) + w2 β2(s),
/// ```
///
/// with `s` the window coordinate in `[0, 1]`, `S` a flat-ended smooth
/// step occupying the last `step_fraction` of the window and `β1`, `β2`
/// compactly supported bumps over the rest. The bump weights are fixed so
/// that the zeroth and first moments of `a'' - b''` vanish, which makes
/// `a` meet `c` with matching value and slope at the knot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Splice {
    pub knot: f64,
    pub width: f64,
    pub step_fraction: f64,
    pub bump_weights: [f64; 2],
    pub left: Box<PieceKind>,
    pub right: Box<PieceKind>,
}

fn psi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let (a, b) = (psi(x), psi(1.0 - x));
        a / (a + b)
    }
}

fn bump(s: f64, lo: f64, hi: f64) -> f64 {
    if s <= lo || s >= hi {
        return 0.0;
    }
    let x = (s - lo) / (hi - lo);
    (4.0 - 1.0 / (x * (1.0 - x))).exp()
}

impl Splice {
    pub fn start(&self) -> f64 {
        self.knot - self.width
    }

    fn split(&self) -> f64 {
        0.5 * (1.0 - self.step_fraction)
    }

    /// `a'' - b''` on the window.
    fn excess(&self, r: f64) -> f64 {
        let s = (r - self.start()) / self.width;
        let tau = self.step_fraction;
        let step = smooth_step((s - (1.0 - tau)) / tau);
        let mut out = self.bump_weights[0] * bump(s, 0.0, self.split()) + self.bump_weights[1] * bump(s, self.split(), 1.0 - tau);
        if step > 0.0 {
            out += step * (self.right.eval(r, 2) - self.left.eval(r, 2));
        }
        out
    }

    fn breaks_until(&self, r: f64) -> Vec<f64> {
        let lo = self.start();
        let mut out = vec![lo];
        for s in [self.split(), 1.0 - self.step_fraction] {
            let x = lo + s * self.width;
            if x < r {
                out.push(x);
            }
        }
        out.push(r);
        out
    }

    pub fn eval(&self, r: f64, order: u8) -> f64 {
        if r < self.start() {
            return self.left.eval(r, order);
        }
        if r > self.knot {
            return self.right.eval(r, order);
        }
        let base = self.left.eval(r, order);
        let scale = self.width.powi(2) * 1e-15;
        match order {
            0 => {
                base + quadrature::integrate_pieces(|u| (r - u) * self.excess(u), &self.breaks_until(r), 1e-12, scale * self.width)
            }
            1 => base + quadrature::integrate_pieces(|u| self.excess(u), &self.breaks_until(r), 1e-12, scale),
            _ => base + self.excess(r),
        }
    }

    fn solve_weights(&mut self) -> Result<()> {
        let lo = self.start();
        let w = self.width;
        let tau = self.step_fraction;
        let tol = 1e-12;
        let at = |s: f64| lo + s * w;
        // moments in window coordinates
        let step_density = |s: f64| {
            let step = smooth_step((s - (1.0 - tau)) / tau);
            let r = at(s);
            step * (self.right.eval(r, 2) - self.left.eval(r, 2))
        };
        let i0 = quadrature::integrate(step_density, 1.0 - tau, 1.0, tol, 1e-300);
        let i1 = quadrature::integrate(|s| (1.0 - s) * step_density(s), 1.0 - tau, 1.0, tol, 1e-300);
        let m = self.split();
        let b10 = quadrature::integrate(|s| bump(s, 0.0, m), 0.0, m, tol, 0.0);
        let b11 = quadrature::integrate(|s| (1.0 - s) * bump(s, 0.0, m), 0.0, m, tol, 0.0);
        let b20 = quadrature::integrate(|s| bump(s, m, 1.0 - tau), m, 1.0 - tau, tol, 0.0);
        let b21 = quadrature::integrate(|s| (1.0 - s) * bump(s, m, 1.0 - tau), m, 1.0 - tau, tol, 0.0);
        let det = b10 * b21 - b20 * b11;
        if det.abs() < 1e-300 {
            return Err(Error::Validation("singular splice moment system".into()));
        }
        self.bump_weights = [(-i0 * b21 + i1 * b20) / det, (-b10 * i1 + b11 * i0) / det];
        Ok(())
    }

    fn within_bounds(&self) -> bool {
        let (bl, cr) = (self.left.eval(self.knot, 2), self.right.eval(self.knot, 2));
        let (lo, hi) = (bl.min(cr), bl.max(cr));
        let (lo, hi) = (lo - BOUND_SLACK * lo.abs(), hi + BOUND_SLACK * hi.abs());
        (0..=CHECK_GRID).all(|i| {
            let r = self.start() + self.width * i as f64 / CHECK_GRID as f64;
            let v = self.eval(r, 2);
            v >= lo - 1e-12 && v <= hi + 1e-12
        })
    }
}

/// Smooths the corner of `b` (for `r < knot`) followed by `c` (for
/// `r >= knot`) over the window `[knot - eps, knot]`.
///
/// The step fraction is halved until the sampled second derivative on the
/// window stays inside `[0.9 min, 1.1 max]` of the one-sided second
/// derivatives at the knot, or until it reaches `1e-6`.
pub fn agol_smooth(b: PieceKind, c: PieceKind, knot: f64, eps: f64) -> Result<Splice> {
    if !(eps > 0.0) {
        return Err(Error::Validation(format!("smoothing width must be positive, got {eps}")));
    }
    let value_gap = (b.eval(knot, 0) - c.eval(knot, 0)).abs();
    let slope_gap = (b.eval(knot, 1) - c.eval(knot, 1)).abs();
    let scale = b.eval(knot, 0).abs().max(1.0);
    if value_gap > MATCH_TOL * scale || slope_gap > MATCH_TOL * b.eval(knot, 1).abs().max(1.0) {
        return Err(Error::Mismatch { at: knot, value_gap, slope_gap });
    }
    let mut splice = Splice {
        knot,
        width: eps,
        step_fraction: INITIAL_STEP_FRACTION,
        bump_weights: [0.0; 2],
        left: Box::new(b),
        right: Box::new(c),
    };
    loop {
        splice.solve_weights()?;
        if splice.within_bounds() || splice.step_fraction * 0.5 < MIN_STEP_FRACTION {
            return Ok(splice);
        }
        splice.step_fraction *= 0.5;
    }
}
