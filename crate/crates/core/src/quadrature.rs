//! Adaptive Gauss–Legendre quadrature.
//!
//! A fixed 10-point rule is compared against the same rule on the two
//! halves of the interval; intervals are bisected until the two estimates
//! agree to the requested tolerance.

use std::sync::OnceLock;

const ORDER: usize = 10;
const MAX_DEPTH: u32 = 30;
const NOISE: f64 = 64.0 * f64::EPSILON;

fn rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// found by Newton iteration on the Legendre recurrence.
fn legendre_rule<const N: usize>(n: usize) -> ([f64; N], [f64; N]) {
    let mut nodes = [0.0; N];
    let mut weights = [0.0; N];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Rule estimate together with the same rule applied to `|f|`.
fn fixed<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let (mut sum, mut abs) = (0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights.iter()) {
        let v = w * f(mid + half * x);
        sum += v;
        abs += v.abs();
    }
    (sum * half, abs * half.abs())
}

/// Integrates `f` over `[a, b]` to the given relative tolerance, with an
/// absolute floor `abs_tol` for integrals near zero.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (whole, whole_abs) = fixed(&mut f, a, b);
    // the relative request becomes one absolute budget shared by all subintervals
    let budget = (rel_tol * whole.abs()).max(abs_tol).max(NOISE * whole_abs);
    recurse(&mut f, a, b, whole, budget, f64::INFINITY, 0)
}

fn recurse<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    parent_err: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (a + b);
    let (left, left_abs) = fixed(f, a, mid);
    let (right, right_abs) = fixed(f, mid, b);
    let refined = left + right;
    let tol = tol.max(NOISE * (left_abs + right_abs));
    let err = (refined - whole).abs();
    // a smooth integrand shrinks the error by orders of magnitude per level; if it
    // stalls, the integrand's own rounding noise has been reached
    let stalled = depth >= 3 && err > 0.5 * parent_err;
    if err <= tol || stalled || depth >= MAX_DEPTH {
        return refined;
    }
    recurse(f, a, mid, left, 0.5 * tol, err, depth + 1) + recurse(f, mid, b, right, 0.5 * tol, err, depth + 1)
}

/// Integrates over consecutive subintervals split at `breaks`.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], rel_tol: f64, abs_tol: f64) -> f64 {
    breaks
        .windows(2)
        .map(|w| integrate(&mut f, w[0], w[1], rel_tol, abs_tol))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let (_, w) = rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomials_are_exact() {
        // 10 points integrate degree 19 exactly
        let v = integrate(|x| x.powi(19) + 3.0 * x.powi(4), 0.0, 1.0, 1e-14, 0.0);
        assert!((v - (1.0 / 20.0 + 3.0 / 5.0)).abs() < 1e-14);
    }

    #[test]
    fn peaked_integrand() {
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 0.0);
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() / exact < 1e-10);
    }
}
