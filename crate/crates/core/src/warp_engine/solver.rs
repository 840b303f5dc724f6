use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::space::{PolylinePath, WPoint, WarpedSpace};
use crate::error::{Error, Result};
use crate::model_spaces::for_each_in_box;

const ARMIJO: f64 = 1e-4;
const JITTER: f64 = 1e-7;
const CANDIDATE_SLACK: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub n_segments: usize,
    pub max_segments: usize,
    /// Refinement stops once doubling changes the length by less than this.
    pub refine_tol: f64,
    pub grad_tol: f64,
    /// Newton iterations per resolution level.
    pub max_iter: usize,
    pub deck_box_radius: i64,
    pub split_rounds: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_segments: 64,
            max_segments: 4096,
            refine_tol: 1e-7,
            grad_tol: 1e-8,
            max_iter: 4000,
            deck_box_radius: 1,
            split_rounds: 4,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicResult {
    pub distance: f64,
    pub path: PolylinePath,
    pub converged: bool,
    /// Whether segment doubling met `refine_tol` before `max_segments`.
    pub refined: bool,
    pub iterations: usize,
    pub residual: f64,
    pub segments: usize,
    /// The path passes through the collapsed set `r = r_min`.
    pub through_core: bool,
}

/// Vertex chain `x_0, .., x_n` in `(r, e, θ)` with `m` carried torus
/// coordinates, and the discrete energy `n Σ_j |x_{j+1} - x_j|²_{mid}`.
struct Chain<'a> {
    space: &'a WarpedSpace,
    k: usize,
    m: usize,
    d: usize,
    n: usize,
    /// Per-vertex flags for coordinates held fixed.
    fixed: Vec<bool>,
}

struct Stats {
    iterations: usize,
    residual: f64,
    converged: bool,
}

/// `(G, G', G'', F, F', F'')` with `G = g²` and `F = f²`.
fn squared_warps(space: &WarpedSpace, r: f64, with_f: bool) -> [f64; 6] {
    let (g, g1, g2) = (space.g(r, 0), space.g(r, 1), space.g(r, 2));
    let mut out = [g * g, 2.0 * g * g1, 2.0 * (g1 * g1 + g * g2), 0.0, 0.0, 0.0];
    if with_f {
        let (f, f1, f2) = (space.f(r, 0), space.f(r, 1), space.f(r, 2));
        out[3] = f * f;
        out[4] = 2.0 * f * f1;
        out[5] = 2.0 * (f1 * f1 + f * f2);
    }
    out
}

impl<'a> Chain<'a> {
    fn new(space: &'a WarpedSpace, m: usize, n: usize) -> Self {
        let k = space.euclid_dim;
        let d = 1 + k + m;
        let mut fixed = vec![false; (n + 1) * d];
        fixed[..d].fill(true);
        fixed[n * d..].fill(true);
        Self { space, k, m, d, n, fixed }
    }

    fn split_sq(&self, x: &[f64], j: usize) -> (f64, f64, f64, f64) {
        let (a, b) = (&x[j * self.d..(j + 1) * self.d], &x[(j + 1) * self.d..(j + 2) * self.d]);
        let dr = b[0] - a[0];
        let se: f64 = (1..1 + self.k).map(|i| (b[i] - a[i]).powi(2)).sum();
        let st: f64 = (1 + self.k..self.d).map(|i| (b[i] - a[i]).powi(2)).sum();
        (dr, se, st, 0.5 * (a[0] + b[0]))
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let mut e = 0.0;
        for j in 0..self.n {
            let (dr, se, st, rm) = self.split_sq(x, j);
            let w = squared_warps(self.space, rm, self.m > 0);
            e += dr * dr + w[0] * se + w[3] * st;
        }
        self.n as f64 * e
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        let nf = self.n as f64;
        let mut grad = vec![0.0; x.len()];
        for j in 0..self.n {
            let (dr, se, st, rm) = self.split_sq(x, j);
            let w = squared_warps(self.space, rm, self.m > 0);
            let half = 0.5 * (w[1] * se + w[4] * st);
            grad[j * d] += nf * (-2.0 * dr + half);
            grad[(j + 1) * d] += nf * (2.0 * dr + half);
            for i in 1..d {
                let c = if i <= self.k { w[0] } else { w[3] };
                let v = nf * 2.0 * c * (x[(j + 1) * d + i] - x[j * d + i]);
                grad[j * d + i] -= v;
                grad[(j + 1) * d + i] += v;
            }
        }
        grad
    }

    /// Block-tridiagonal Hessian: diagonal blocks and upper off-diagonal blocks.
    fn hessian(&self, x: &[f64]) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
        let d = self.d;
        let nf = self.n as f64;
        let mut diag = vec![DMatrix::zeros(d, d); self.n + 1];
        let mut upper = vec![DMatrix::zeros(d, d); self.n];
        for j in 0..self.n {
            let (_, se, st, rm) = self.split_sq(x, j);
            let w = squared_warps(self.space, rm, self.m > 0);
            let c = 0.25 * (w[2] * se + w[5] * st);
            let (a, b) = (j, j + 1);
            diag[a][(0, 0)] += nf * (2.0 + c);
            diag[b][(0, 0)] += nf * (2.0 + c);
            upper[j][(0, 0)] += nf * (-2.0 + c);
            for i in 1..d {
                let (cw, cw1) = if i <= self.k { (w[0], w[1]) } else { (w[3], w[4]) };
                let delta = x[b * d + i] - x[a * d + i];
                let mixed = nf * cw1 * delta;
                // d²/dr_a de_a = -G'Δ, d²/dr_b de_b = +G'Δ, d²/dr_a de_b = +G'Δ, d²/dr_b de_a = -G'Δ
                diag[a][(0, i)] -= mixed;
                diag[a][(i, 0)] -= mixed;
                diag[b][(0, i)] += mixed;
                diag[b][(i, 0)] += mixed;
                upper[j][(0, i)] += mixed;
                upper[j][(i, 0)] -= mixed;
                diag[a][(i, i)] += nf * 2.0 * cw;
                diag[b][(i, i)] += nf * 2.0 * cw;
                upper[j][(i, i)] -= nf * 2.0 * cw;
            }
        }
        (diag, upper)
    }

    fn clamp(&self, x: &mut [f64]) {
        let [lo, hi] = self.space.interval;
        for j in 0..=self.n {
            x[j * self.d] = x[j * self.d].clamp(lo, hi);
        }
    }

    /// Fixed flags plus the radial coordinates pressed against a bound.
    fn active(&self, x: &[f64], grad: &[f64]) -> Vec<bool> {
        let [lo, hi] = self.space.interval;
        let mut act = self.fixed.clone();
        for j in 0..=self.n {
            let i = j * self.d;
            if (x[i] <= lo && grad[i] > 0.0) || (x[i] >= hi && grad[i] < 0.0) {
                act[i] = true;
            }
        }
        act
    }

    /// Solves `(H + μ I) p = -grad` on the free coordinates; `None` when the
    /// damped system is not positive definite.
    fn newton_step(
        &self,
        diag: &[DMatrix<f64>],
        upper: &[DMatrix<f64>],
        grad: &[f64],
        act: &[bool],
        mu: f64,
    ) -> Option<Vec<f64>> {
        let d = self.d;
        let mask = |blk: &DMatrix<f64>, r0: usize, c0: usize| {
            DMatrix::from_fn(d, d, |i, j| if act[r0 + i] || act[c0 + j] { 0.0 } else { blk[(i, j)] })
        };
        let mut factors: Vec<Cholesky<f64, Dyn>> = Vec::with_capacity(self.n + 1);
        let mut ys: Vec<DVector<f64>> = Vec::with_capacity(self.n + 1);
        let mut uppers: Vec<DMatrix<f64>> = Vec::with_capacity(self.n);
        for j in 0..=self.n {
            let mut s = mask(&diag[j], j * d, j * d);
            for i in 0..d {
                s[(i, i)] += if act[j * d + i] { 1.0 } else { mu };
            }
            let mut y = DVector::from_fn(d, |i, _| if act[j * d + i] { 0.0 } else { -grad[j * d + i] });
            if j > 0 {
                let o: &DMatrix<f64> = &uppers[j - 1];
                let prev = &factors[j - 1];
                s -= o.transpose() * prev.solve(o);
                y -= o.transpose() * prev.solve(&ys[j - 1]);
            }
            factors.push(Cholesky::new(s)?);
            ys.push(y);
            if j < self.n {
                uppers.push(mask(&upper[j], j * d, (j + 1) * d));
            }
        }
        let mut step = vec![0.0; (self.n + 1) * d];
        let mut next: Option<DVector<f64>> = None;
        for j in (0..=self.n).rev() {
            let mut rhs = ys[j].clone();
            if let Some(xn) = &next {
                rhs -= &uppers[j] * xn;
            }
            let xj = factors[j].solve(&rhs);
            step[j * d..(j + 1) * d].copy_from_slice(xj.as_slice());
            next = Some(xj);
        }
        Some(step)
    }

    /// Damped Newton with an active set for the radial bounds.
    fn minimize(&self, x: &mut Vec<f64>, tol: f64, max_iter: usize) -> Stats {
        self.clamp(x);
        let mut e = self.energy(x);
        let mut mu = 0.0;
        let mut iterations = 0;
        let mut residual = f64::INFINITY;
        while iterations < max_iter {
            let grad = self.gradient(x);
            let act = self.active(x, &grad);
            residual = grad.iter().zip(&act).filter(|(_, a)| !**a).fold(0.0f64, |m, (g, _)| m.max(g.abs()));
            if residual < tol {
                return Stats { iterations, residual, converged: true };
            }
            let (diag, upper) = self.hessian(x);
            let scale = diag.iter().map(|b| b.trace()).sum::<f64>() / ((self.n + 1) * self.d) as f64;
            let mut accepted = false;
            while iterations < max_iter {
                iterations += 1;
                let Some(step) = self.newton_step(&diag, &upper, &grad, &act, mu * scale) else {
                    mu = (mu * 4.0).max(1e-10);
                    continue;
                };
                let mut trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + s).collect();
                self.clamp(&mut trial);
                let decrease: f64 = grad.iter().zip(trial.iter().zip(x.iter())).map(|(g, (t, a))| g * (t - a)).sum();
                let et = self.energy(&trial);
                if et <= e + ARMIJO * decrease && decrease <= 0.0 {
                    let stalled = et >= e;
                    *x = trial;
                    e = et;
                    mu = if mu < 1e-10 { 0.0 } else { mu / 4.0 };
                    accepted = !stalled;
                    break;
                }
                if mu > 1e12 {
                    break;
                }
                mu = (mu * 4.0).max(1e-10);
            }
            if !accepted {
                break;
            }
        }
        let grad = self.gradient(x);
        let act = self.active(x, &grad);
        residual = residual.min(grad.iter().zip(&act).filter(|(_, a)| !**a).fold(0.0f64, |m, (g, _)| m.max(g.abs())));
        Stats { iterations, residual, converged: residual < tol }
    }

    fn subdivide(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut out = Vec::with_capacity((2 * self.n + 1) * d);
        for j in 0..self.n {
            out.extend_from_slice(&x[j * d..(j + 1) * d]);
            out.extend((0..d).map(|i| 0.5 * (x[j * d + i] + x[(j + 1) * d + i])));
        }
        out.extend_from_slice(&x[self.n * d..]);
        out
    }

    fn refined(&self) -> Chain<'a> {
        let d = self.d;
        let mut fixed = vec![false; (2 * self.n + 1) * d];
        for j in 0..=self.n {
            fixed[2 * j * d..(2 * j + 1) * d].copy_from_slice(&self.fixed[j * d..(j + 1) * d]);
        }
        Chain { space: self.space, k: self.k, m: self.m, d, n: 2 * self.n, fixed }
    }
}

fn straight(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity((n + 1) * a.len());
    for j in 0..=n {
        let s = j as f64 / n as f64;
        x.extend(a.iter().zip(b).map(|(u, v)| u + s * (v - u)));
    }
    x
}

enum Kind {
    /// Cover path between `p` and a lift of `q`.
    Regular,
    /// `(r, e)` path through the vertex `mid`, pinned at `r_min`; `θ` is
    /// constant on each side of it.
    Split { mid: usize, theta_p: Vec<f64>, theta_q: Vec<f64> },
}

struct Candidate<'a> {
    chain: Chain<'a>,
    x: Vec<f64>,
    kind: Kind,
    stats: Stats,
    length: f64,
}

impl<'a> Candidate<'a> {
    /// Full cover coordinates of the path vertices.
    fn cover(&self) -> Vec<Vec<f64>> {
        let d = self.chain.d;
        let rows = self.x.chunks(d);
        match &self.kind {
            Kind::Regular => rows.map(<[f64]>::to_vec).collect(),
            Kind::Split { mid, theta_p, theta_q } => {
                let mut out = Vec::with_capacity(self.chain.n + 2);
                for (j, v) in rows.enumerate() {
                    if j <= *mid {
                        out.push(v.iter().chain(theta_p).copied().collect());
                    }
                    if j >= *mid {
                        out.push(v.iter().chain(theta_q).copied().collect());
                    }
                }
                out
            }
        }
    }

    fn measure(&mut self) {
        let space = self.chain.space;
        self.length = self.cover().windows(2).map(|w| space.segment_length(&w[0], &w[1])).sum();
    }

    fn refine_once(&mut self, cfg: &SolverConfig) {
        self.x = self.chain.subdivide(&self.x);
        self.chain = self.chain.refined();
        if let Kind::Split { mid, .. } = &mut self.kind {
            *mid *= 2;
        }
        let s = self.chain.minimize(&mut self.x, cfg.grad_tol, cfg.max_iter);
        self.stats = Stats { iterations: self.stats.iterations + s.iterations, ..s };
        self.measure();
    }
}

fn regular<'a>(space: &'a WarpedSpace, a: &[f64], b: &[f64], cfg: &SolverConfig, rng: Option<&mut ChaCha8Rng>) -> Candidate<'a> {
    let n = cfg.n_segments;
    let chain = Chain::new(space, space.torus_dim(), n);
    let mut x = straight(a, b, n);
    if let Some(rng) = rng {
        for j in 1..n {
            x[j * chain.d] += JITTER * rng.gen::<f64>();
        }
    }
    let stats = chain.minimize(&mut x, cfg.grad_tol, cfg.max_iter);
    let mut c = Candidate { chain, x, kind: Kind::Regular, stats, length: 0.0 };
    c.measure();
    c
}

fn split<'a>(space: &'a WarpedSpace, p: &WPoint, q: &WPoint, cfg: &SolverConfig) -> Candidate<'a> {
    let n = cfg.n_segments;
    let r0 = space.r_min();
    let (hp, hq) = (p.r - r0, q.r - r0);
    let mut rho = if hp + hq > 0.0 { hp / (hp + hq) } else { 0.5 };
    let mut e_mid: Vec<f64> = p.e.iter().zip(&q.e).map(|(a, b)| a + rho * (b - a)).collect();
    let a: Vec<f64> = std::iter::once(p.r).chain(p.e.iter().copied()).collect();
    let b: Vec<f64> = std::iter::once(q.r).chain(q.e.iter().copied()).collect();
    let mut best: Option<Candidate<'a>> = None;
    let mut iterations = 0;
    let mut last_mid = usize::MAX;
    for _ in 0..cfg.split_rounds.max(1) {
        let mid = ((rho * n as f64).round() as usize).clamp(1, n - 1);
        if mid == last_mid {
            break;
        }
        last_mid = mid;
        let c: Vec<f64> = std::iter::once(r0).chain(e_mid.iter().copied()).collect();
        let mut x = straight(&a, &c, mid);
        x.extend(straight(&c, &b, n - mid).into_iter().skip(c.len()));
        let mut chain = Chain::new(space, 0, n);
        chain.fixed[mid * chain.d] = true;
        let stats = chain.minimize(&mut x, cfg.grad_tol, cfg.max_iter);
        iterations += stats.iterations;
        let kind = Kind::Split { mid, theta_p: p.theta.clone(), theta_q: q.theta.clone() };
        let mut cand = Candidate { chain, x, kind, stats, length: 0.0 };
        cand.measure();
        let cover = cand.cover();
        let l1: f64 = cover[..=mid].windows(2).map(|w| space.segment_length(&w[0], &w[1])).sum();
        rho = if cand.length > 0.0 { l1 / cand.length } else { 0.5 };
        let d = cand.chain.d;
        e_mid = cand.x[mid * d + 1..(mid + 1) * d].to_vec();
        if best.as_ref().is_none_or(|b| cand.length < b.length) {
            best = Some(cand);
        }
    }
    let mut best = best.expect("at least one split round");
    best.stats.iterations = iterations;
    best
}

/// Shortest path between `p` and `q` by discrete energy minimization.
///
/// ```
/// use catfill::warp_engine::{solve_geodesic, WPoint, WarpedSpace};
///
/// let flat = WarpedSpace::flat(0.0, 10.0, 1).unwrap();
/// let p = WPoint::new(1.0, vec![0.0], vec![]);
/// let q = WPoint::new(4.0, vec![4.0], vec![]);
/// let res = solve_geodesic(&flat, &p, &q, 16, 42).unwrap();
/// assert!((res.distance - 5.0).abs() < 1e-9);
/// ```
pub fn solve_geodesic(space: &WarpedSpace, p: &WPoint, q: &WPoint, n_segments: usize, seed: u64) -> Result<GeodesicResult> {
    let cfg = SolverConfig { n_segments, seed, ..SolverConfig::default() };
    solve_geodesic_with(space, p, q, &cfg)
}

pub fn solve_geodesic_with(space: &WarpedSpace, p: &WPoint, q: &WPoint, cfg: &SolverConfig) -> Result<GeodesicResult> {
    space.check_point(p)?;
    space.check_point(q)?;
    if cfg.n_segments < 8 || cfg.max_segments < cfg.n_segments {
        return Err(Error::Validation(format!(
            "n_segments must be at least 8 and at most max_segments (got {} and {})",
            cfg.n_segments, cfg.max_segments
        )));
    }
    if space.same_point(p, q, 0.0) {
        let path = PolylinePath { vertices: vec![p.clone(), q.clone()], deck_shifts: vec![vec![0; space.torus_dim()]] };
        return Ok(GeodesicResult {
            distance: 0.0,
            path,
            converged: true,
            refined: true,
            iterations: 0,
            residual: 0.0,
            segments: 1,
            through_core: false,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut candidates: Vec<Candidate> = Vec::new();
    let (mut p, mut q) = (p.clone(), q.clone());
    let k = space.euclid_dim;
    match &space.torus {
        None => candidates.push(regular(space, &p.coords(), &q.coords(), cfg, None)),
        Some(_) if space.on_core(&p) || space.on_core(&q) => {
            if space.on_core(&q) {
                q.theta = p.theta.clone();
            } else {
                p.theta = q.theta.clone();
            }
            candidates.push(regular(space, &p.coords(), &q.coords(), cfg, Some(&mut rng)));
        }
        Some(t) => {
            let diff: Vec<f64> = p.theta.iter().zip(&q.theta).map(|(a, b)| a - b).collect();
            let base: Vec<i64> = t.coefficients(&diff).iter().map(|c| c.round() as i64).collect();
            let a = p.coords();
            let jitter = space.singular_at_zero();
            let mut shifts = Vec::new();
            for_each_in_box(t.dim(), cfg.deck_box_radius, |c| shifts.push(c.iter().zip(&base).map(|(u, v)| u + v).collect::<Vec<i64>>()));
            for c in shifts {
                let mut b = q.coords();
                for (i, v) in t.translation(&c).iter().enumerate() {
                    b[1 + k + i] += v;
                }
                candidates.push(regular(space, &a, &b, cfg, if jitter { Some(&mut rng) } else { None }));
            }
            if space.singular_at_zero() {
                candidates.push(split(space, &p, &q, cfg));
            }
        }
    }
    let best = candidates.iter().map(|c| c.length).fold(f64::INFINITY, f64::min);
    candidates.retain(|c| c.length <= best + CANDIDATE_SLACK * (1.0 + best));
    let mut refined_all = true;
    for c in &mut candidates {
        let mut prev = c.length;
        let mut done = false;
        while 2 * c.chain.n <= cfg.max_segments {
            c.refine_once(cfg);
            if (c.length - prev).abs() < cfg.refine_tol {
                done = true;
                break;
            }
            prev = c.length;
        }
        refined_all &= done;
    }
    let winner = candidates
        .into_iter()
        .min_by(|a, b| a.length.total_cmp(&b.length))
        .ok_or_else(|| Error::SolverFailure("no candidate paths".into()))?;
    let cover = winner.cover();
    let path = space.unlift(&cover);
    let distance = cover.windows(2).map(|w| space.segment_length(&w[0], &w[1])).sum();
    let through_core = matches!(winner.kind, Kind::Split { .. });
    Ok(GeodesicResult {
        distance,
        segments: path.deck_shifts.len(),
        path,
        converged: winner.stats.converged,
        refined: refined_all,
        iterations: winner.stats.iterations,
        residual: winner.stats.residual,
        through_core,
    })
}

/// Point at arclength `s` along a path, interpolating linearly inside the
/// segment that contains it.
pub fn point_at_arclength(space: &WarpedSpace, path: &PolylinePath, s: f64) -> Result<WPoint> {
    let cover = space.lift(path)?;
    let total: f64 = cover.windows(2).map(|w| space.segment_length(&w[0], &w[1])).sum();
    if !(s >= 0.0 && s <= total * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange { arclength: s, length: total });
    }
    let mut acc = 0.0;
    for w in cover.windows(2) {
        let l = space.segment_length(&w[0], &w[1]);
        if acc + l >= s && l > 0.0 {
            let u = ((s - acc) / l).clamp(0.0, 1.0);
            let x: Vec<f64> = w[0].iter().zip(&w[1]).map(|(a, b)| a + u * (b - a)).collect();
            return Ok(space.reduce(&WPoint::from_coords(&x, space.euclid_dim)));
        }
        acc += l;
    }
    let last = cover.last().expect("nonempty path");
    Ok(space.reduce(&WPoint::from_coords(last, space.euclid_dim)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spaces::LatticeTorus;

    #[test]
    fn gradient_matches_finite_differences() {
        let s = WarpedSpace::standard_singular(4.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
        let chain = Chain::new(&s, 1, 8);
        let mut x = straight(&[0.5, 0.0, 0.0], &[1.5, 2.0, 3.0], 8);
        for (i, v) in x.iter_mut().enumerate() {
            *v += 0.05 * ((i * 7 % 5) as f64 - 2.0);
        }
        let g = chain.gradient(&x);
        let (diag, upper) = chain.hessian(&x);
        let h = 1e-6;
        for i in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (chain.energy(&xp) - chain.energy(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-5 * (1.0 + g[i].abs()), "grad {i}: {fd} vs {}", g[i]);
            let gp = chain.gradient(&xp);
            let gm = chain.gradient(&xm);
            let (vi, ci) = (i / 3, i % 3);
            for jv in vi.saturating_sub(1)..=(vi + 1).min(8) {
                for cj in 0..3 {
                    let fd = (gp[jv * 3 + cj] - gm[jv * 3 + cj]) / (2.0 * h);
                    let exact = if jv == vi {
                        diag[vi][(ci, cj)]
                    } else if jv == vi + 1 {
                        upper[vi][(ci, cj)]
                    } else {
                        upper[jv][(cj, ci)]
                    };
                    assert!((fd - exact).abs() < 1e-4 * (1.0 + exact.abs()), "hess ({i},{jv},{cj}): {fd} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn coincident_points() {
        let s = WarpedSpace::hyperbolic(-3.0, 3.0, 1).unwrap();
        let p = WPoint::new(0.3, vec![0.1], vec![]);
        let res = solve_geodesic(&s, &p, &p, 64, 1).unwrap();
        assert_eq!(res.distance, 0.0);
        assert!(res.converged);
    }

    #[test]
    fn rejects_tiny_segment_count() {
        let s = WarpedSpace::flat(0.0, 1.0, 1).unwrap();
        let p = WPoint::new(0.3, vec![0.1], vec![]);
        assert!(solve_geodesic(&s, &p, &p, 4, 1).is_err());
    }

    #[test]
    fn opposite_sides_of_the_core_pass_through_it() {
        let s = WarpedSpace::standard_singular(4.0, 0, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
        let p = WPoint::new(1.0, vec![], vec![0.0]);
        let q = WPoint::new(0.5, vec![], vec![3.5]);
        let res = solve_geodesic(&s, &p, &q, 32, 42).unwrap();
        assert!(res.through_core);
        assert!((res.distance - 1.5).abs() < 1e-9, "{}", res.distance);
    }
}
