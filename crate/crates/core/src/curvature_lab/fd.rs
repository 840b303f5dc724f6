use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::warp_engine::{WPoint, WarpedSpace};

pub const FD_STEP: f64 = 1e-4;
const SINGULAR_WARP: f64 = 1e-8;

/// Central differences at steps `h` and `h/2`, combined by one Richardson step.
fn richardson(h: f64, diff: impl Fn(f64) -> f64) -> f64 {
    (4.0 * diff(0.5 * h) - diff(h)) / 3.0
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, h) in moves {
        y[i] += h;
    }
    y
}

/// Sectional curvature of the plane spanned by `u`, `v` for the metric
/// `metric(x)` in chart coordinates, from finite differences of the metric.
///
/// ```
/// use catfill::curvature_lab::fd_sectional_metric;
/// use nalgebra::DMatrix;
///
/// // unit sphere in polar coordinates
/// let sphere = |x: &[f64]| DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, x[0].sin().powi(2)]));
/// let k = fd_sectional_metric(&sphere, &[1.0, 0.3], &[1.0, 0.0], &[0.0, 1.0]);
/// assert!((k - 1.0).abs() < 1e-6);
/// ```
pub fn fd_sectional_metric(metric: &dyn Fn(&[f64]) -> DMatrix<f64>, x: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let n = x.len();
    let g = metric(x);
    let ginv = g.clone().try_inverse().expect("metric must be invertible");
    // dg[c][(a, b)] = ∂_c g_ab, ddg[c][d][(a, b)] = ∂_c ∂_d g_ab
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|c| {
            DMatrix::from_fn(n, n, |a, b| {
                richardson(FD_STEP, |h| (metric(&shifted(x, &[(c, h)]))[(a, b)] - metric(&shifted(x, &[(c, -h)]))[(a, b)]) / (2.0 * h))
            })
        })
        .collect();
    let ddg: Vec<Vec<DMatrix<f64>>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|d| {
                    let second = |h: f64| {
                        let at = |sc: f64, sd: f64| {
                            if c == d {
                                metric(&shifted(x, &[(c, (sc + sd) * h)]))
                            } else {
                                metric(&shifted(x, &[(c, sc * h), (d, sd * h)]))
                            }
                        };
                        if c == d {
                            (at(0.5, 0.5) - 2.0 * g.clone() + at(-0.5, -0.5)) / (h * h)
                        } else {
                            (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h)
                        }
                    };
                    let (d1, d2) = (second(FD_STEP), second(0.5 * FD_STEP));
                    (d2 * 4.0 - d1) / 3.0
                })
                .collect()
        })
        .collect();
    // first-kind symbols [bc, e] = ½(∂_b g_ec + ∂_c g_eb − ∂_e g_bc) and their derivatives
    let first = |b: usize, c: usize, e: usize| 0.5 * (dg[b][(e, c)] + dg[c][(e, b)] - dg[e][(b, c)]);
    let dfirst = |k: usize, b: usize, c: usize, e: usize| 0.5 * (ddg[k][b][(e, c)] + ddg[k][c][(e, b)] - ddg[k][e][(b, c)]);
    let gamma = |a: usize, b: usize, c: usize| (0..n).map(|e| ginv[(a, e)] * first(b, c, e)).sum::<f64>();
    // ∂_k g^{ae} = −g^{ap} (∂_k g_pq) g^{qe}
    let dginv: Vec<DMatrix<f64>> = (0..n).map(|k| -(&ginv * &dg[k] * &ginv)).collect();
    let dgamma = |k: usize, a: usize, b: usize, c: usize| {
        (0..n).map(|e| dginv[k][(a, e)] * first(b, c, e) + ginv[(a, e)] * dfirst(k, b, c, e)).sum::<f64>()
    };
    let mut gam = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                gam[(a * n + b) * n + c] = gamma(a, b, c);
            }
        }
    }
    let gm = |a: usize, b: usize, c: usize| gam[(a * n + b) * n + c];
    // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} − Γ^a_{de} Γ^e_{cb}
    let riemann = |a: usize, b: usize, c: usize, d: usize| {
        dgamma(c, a, d, b) - dgamma(d, a, c, b) + (0..n).map(|e| gm(a, c, e) * gm(e, d, b) - gm(a, d, e) * gm(e, c, b)).sum::<f64>()
    };
    let mut num = 0.0;
    for a in 0..n {
        let wa: f64 = (0..n).map(|f| g[(a, f)] * u[f]).sum();
        if wa == 0.0 {
            continue;
        }
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let w = wa * v[b] * u[c] * v[d];
                    if w != 0.0 {
                        num += w * riemann(a, b, c, d);
                    }
                }
            }
        }
    }
    let ip = |p: &[f64], q: &[f64]| (0..n).map(|a| (0..n).map(|b| g[(a, b)] * p[a] * q[b]).sum::<f64>()).sum::<f64>();
    num / (ip(u, u) * ip(v, v) - ip(u, v).powi(2))
}

/// Diagonal chart metric `diag(1, g², .., f², ..)` of a warped space.
pub fn chart_metric(space: &WarpedSpace) -> impl Fn(&[f64]) -> DMatrix<f64> + '_ {
    move |x: &[f64]| {
        let n = space.chart_dim();
        let (g, f) = (space.g(x[0], 0).powi(2), space.f(x[0], 0).powi(2));
        DMatrix::from_fn(n, n, |i, j| match (i == j, i) {
            (false, _) => 0.0,
            (true, 0) => 1.0,
            (true, i) if i <= space.euclid_dim => g,
            _ => f,
        })
    }
}

/// Sectional curvature at `point` of the plane spanned by tangent vectors
/// `u`, `v` given in chart components.
pub fn fd_sectional_vectors(space: &WarpedSpace, point: &WPoint, u: &[f64], v: &[f64]) -> Result<f64> {
    space.check_point(point)?;
    if space.torus.is_some() && space.f(point.r, 0) < SINGULAR_WARP {
        return Err(Error::SingularPoint { r: point.r });
    }
    let n = space.chart_dim();
    if u.len() != n || v.len() != n {
        return Err(Error::Validation(format!("tangent vectors need {n} components")));
    }
    let metric = chart_metric(space);
    Ok(fd_sectional_metric(&metric, &point.coords(), u, v))
}

/// Sectional curvature of the coordinate plane `(plane.0, plane.1)`.
///
/// ```
/// use catfill::curvature_lab::fd_sectional;
/// use catfill::warp_engine::{WPoint, WarpedSpace};
///
/// let h3 = WarpedSpace::hyperbolic(-3.0, 3.0, 2).unwrap();
/// let k = fd_sectional(&h3, &WPoint::new(0.4, vec![0.0, 0.0], vec![]), (1, 2)).unwrap();
/// assert!((k + 1.0).abs() < 1e-4);
/// ```
pub fn fd_sectional(space: &WarpedSpace, point: &WPoint, plane: (usize, usize)) -> Result<f64> {
    let n = space.chart_dim();
    let (i, j) = plane;
    if i == j || i >= n || j >= n {
        return Err(Error::Validation(format!("plane ({i}, {j}) is not two distinct coordinate directions below {n}")));
    }
    let unit = |k: usize| (0..n).map(|m| if m == k { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    fd_sectional_vectors(space, point, &unit(i), &unit(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn poincare_half_plane_metric() {
        let h = |x: &[f64]| DMatrix::from_diagonal(&DVector::from_vec(vec![1.0 / (x[1] * x[1]); 2]));
        let k = fd_sectional_metric(&h, &[0.3, 1.7], &[1.0, 0.2], &[0.5, -1.0]);
        assert!((k + 1.0).abs() < 1e-6, "{k}");
    }

    #[test]
    fn non_diagonal_metric_of_the_sphere() {
        // round sphere of radius 2 pulled back along (x, y) ↦ (x - y, y)
        let m = |x: &[f64]| {
            let s = (x[0] - x[1]).sin().powi(2);
            DMatrix::from_row_slice(2, 2, &[4.0, -4.0, -4.0, 4.0 + 4.0 * s])
        };
        let k = fd_sectional_metric(&m, &[1.1, 0.2], &[1.0, 0.0], &[0.0, 1.0]);
        assert!((k - 0.25).abs() < 1e-6, "{k}");
    }
}
