//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, each timed
//! against its runtime budget.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use catfill::curvature_lab::*;
use catfill::filling_topology::*;
use catfill::model_spaces::{halfplane_distance, horo_to_halfplane, LatticeTorus};
use catfill::warp_engine::*;
use catfill::warp_functions::{build_fg, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn pt(r: f64, e: &[f64], theta: &[f64]) -> WPoint {
    WPoint::new(r, e.to_vec(), theta.to_vec())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_warp_functions() -> Outcome {
    let fg = build_fg(1.6, Some(0.2)).map_err(|e| e.to_string())?;
    let (lo_end, tail) = (fg.delta, 1.8);
    for i in 0..=100 {
        let r = lo_end * i as f64 / 100.0;
        let (f, g) = (fg.f.eval(r, 0, Side::Left).unwrap(), fg.g.eval(r, 0, Side::Left).unwrap());
        ensure(f == r.sinh() && g == r.cosh(), format!("head piece not exact at r = {r}"))?;
        let r = tail + 0.8 * i as f64 / 100.0;
        let v = (r - 1.0).exp();
        let (f, g) = (fg.f.eval(r, 0, Side::Right).unwrap(), fg.g.eval(r, 0, Side::Right).unwrap());
        ensure(f == v && g == v, format!("tail piece not exact at r = {r}"))?;
    }
    let mismatch = fg.f.knot_mismatch().max(fg.g.knot_mismatch());
    ensure(mismatch < 1e-8, format!("knot mismatch {mismatch:e}"))?;
    let (mut fmin, mut gmin) = (f64::INFINITY, f64::INFINITY);
    for i in 1..=10_000 {
        let r = 2.6 * i as f64 / 10_000.0;
        fmin = fmin.min(fg.f.eval(r, 2, Side::Right).unwrap());
        gmin = gmin.min(fg.g.eval(r, 2, Side::Right).unwrap());
    }
    ensure(fmin > 0.0, format!("grid min f'' = {fmin:e}"))?;
    ensure(gmin >= fg.kappa_floor && fg.kappa_floor > 0.0, format!("grid min g'' = {gmin:e}, floor {:e}", fg.kappa_floor))?;
    Ok(format!("knot mismatch {mismatch:.1e}, min f'' {fmin:.2e}, min g'' {gmin:.3} ≥ κ_floor {:.3}", fg.kappa_floor))
}

fn c2_model_isometry() -> Outcome {
    let s = WarpedSpace::hyperbolic(-30.0, 30.0, 1).unwrap();
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut worst) = (0, 0.0f64);
    while checked < 200 {
        let p = pt(rng.gen_range(-2.0..2.0), &[rng.gen_range(-3.0..3.0)], &[]);
        let q = pt(rng.gen_range(-2.0..2.0), &[rng.gen_range(-3.0..3.0)], &[]);
        let oracle = halfplane_distance(horo_to_halfplane(p.r, p.e[0]), horo_to_halfplane(q.r, q.e[0])).unwrap();
        if oracle > 5.0 {
            continue;
        }
        checked += 1;
        let d = solve_geodesic_with(&s, &p, &q, &cfg).map_err(|e| e.to_string())?.distance;
        worst = worst.max((d - oracle).abs());
    }
    ensure(worst < 1e-4, format!("max error {worst:e}"))?;
    Ok(format!("200 pairs, max |d - d_H| = {worst:.2e}"))
}

fn c3_direction_formula() -> Outcome {
    let s = WarpedSpace::standard_singular(6.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
    let cfg = SolverConfig::default();
    let a0 = 0.0;
    let p = pt(0.0, &[a0], &[0.0]);
    let e_ray = pt(0.0, &[a0 + 1.0], &[0.0]);
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let t1 = 0.2 + 0.2 * i as f64;
            let sep = 0.2 + 0.2 * j as f64;
            let target = pt(t1, &[a0 + sep], &[3.0]);
            let est = alexandrov_angle(&s, &p, &target, &e_ray, &DEFAULT_SCALES, &cfg).map_err(|e| e.to_string())?;
            // closed form written out independently of direction_at_singular
            let phi = (t1.tanh() / sep.sinh()).atan();
            worst = worst.max((est.angle - phi).abs());
        }
    }
    ensure(worst < 1e-2, format!("max error {worst:e}"))?;
    Ok(format!("5×5 grid, max |angle - arctan(tanh t₁/sinh|Δa|)| = {worst:.2e}"))
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn c4_curvature_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h3 = WarpedSpace::hyperbolic(-3.0, 3.0, 2).unwrap();
    let mut worst_h = 0.0f64;
    for _ in 0..20 {
        let p = pt(rng.gen_range(-2.0..2.0), &[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)], &[]);
        let (u, v) = (random_unit(&mut rng, 3), random_unit(&mut rng, 3));
        let k = fd_sectional_vectors(&h3, &p, &u, &v).map_err(|e| e.to_string())?;
        worst_h = worst_h.max((k + 1.0).abs());
    }
    ensure(worst_h < 1e-4, format!("H³ max |K + 1| = {worst_h:e}"))?;
    let torus = LatticeTorus::square(1, 7.0).unwrap();
    let mut worst_gap = f64::NEG_INFINITY;
    for k in [1, 2] {
        let s = WarpedSpace::from_fg(1.6, Some(0.2), k, torus.clone()).unwrap();
        let n = s.chart_dim();
        for _ in 0..50 {
            let r = rng.gen_range(0.05..2.6);
            let p = pt(r, &vec![rng.gen_range(-1.0..1.0); k], &[rng.gen_range(0.0..7.0)]);
            let fd = fd_sectional_vectors(&s, &p, &random_unit(&mut rng, n), &random_unit(&mut rng, n)).map_err(|e| e.to_string())?;
            let t = sectional_terms(&s.warp_g, &s.warp_f, k, 1, r).unwrap();
            worst_gap = worst_gap.max((t.lower - fd).max(fd - t.upper));
        }
    }
    ensure(worst_gap <= 1e-3, format!("fd outside the term interval by {worst_gap:e}"))?;
    let mut kappas = Vec::new();
    for k in [0, 1] {
        let s = WarpedSpace::from_fg(1.6, Some(0.2), k, torus.clone()).unwrap();
        let scan = curvature_scan(&s, &ScanGrid { points: 2001, spot_checks: 0, seed: 4 }).map_err(|e| e.to_string())?;
        ensure(scan.empirical_kappa > 0.0, format!("k = {k}: empirical κ = {:e}", scan.empirical_kappa))?;
        kappas.push(scan.empirical_kappa);
    }
    Ok(format!("H³ max |K + 1| = {worst_h:.1e}; 100 fg samples, worst excursion {worst_gap:.1e}; κ(k=0) = {:.3}, κ(k=1) = {:.3}", kappas[0], kappas[1]))
}

fn c5_cat_campaign() -> Outcome {
    let cfg = SolverConfig::default();
    let h2 = WarpedSpace::hyperbolic(-20.0, 20.0, 1).unwrap();
    let chart = ChartBox { lower: vec![-0.7, -0.7], upper: vec![0.7, 0.7] };
    let hyp = cat_campaign(&h2, &chart, 200, &[-1.0], 20, 5, &cfg).map_err(|e| e.to_string())?;
    let hv = hyp.reports[0].max_violation;
    ensure(hv <= CAT_TOLERANCE, format!("H² κ = -1 violation {hv:e}"))?;
    let flat = WarpedSpace::flat(-5.0, 5.0, 1).unwrap();
    let chart = ChartBox { lower: vec![-2.0, -2.0], upper: vec![2.0, 2.0] };
    let fl = cat_campaign(&flat, &chart, 200, &[0.0], 20, 6, &cfg).map_err(|e| e.to_string())?;
    let fv = fl.reports[0].max_violation;
    ensure(fv <= CAT_TOLERANCE, format!("flat κ = 0 violation {fv:e}"))?;
    let tri = [pt(0.0, &[0.0], &[]), pt(1.0, &[0.0], &[]), pt(0.5, &[0.75f64.sqrt()], &[])];
    let eq = cat_test(&flat, &tri, -1.0, 40, 7, &cfg).map_err(|e| e.to_string())?;
    ensure(eq.max_violation > 1e-3, format!("equilateral violation only {:e}", eq.max_violation))?;
    Ok(format!("H² κ=-1 max violation {hv:.1e}, flat κ=0 {fv:.1e}, equilateral vs κ=-1 {:.2e}", eq.max_violation))
}

fn c6_fk_convexity() -> Outcome {
    let (c, radius) = (0.3, 2.0);
    let x = Complex64::new(0.5, 0.7);
    let samples: Vec<(f64, f64)> = (0..=300)
        .map(|i| {
            let t = -1.5 + 3.0 * i as f64 / 300.0;
            (t, halfplane_distance(Complex64::new(c + radius * t.tanh(), radius / t.cosh()), x).unwrap().cosh())
        })
        .collect();
    let cosh_rep = fk_convexity(&samples, -1.0, DEFAULT_WINDOW, EXACT_MARGIN).map_err(|e| e.to_string())?;
    ensure(cosh_rep.passed, format!("cosh-distance: {} violations", cosh_rep.violation_count))?;

    let s = WarpedSpace::standard_singular(6.0, 1, LatticeTorus::square(1, 7.0).unwrap()).unwrap();
    let cfg = SolverConfig::default();
    let mut sinh_max = f64::NEG_INFINITY;
    for (p, q) in [
        (pt(0.8, &[0.0], &[0.5]), pt(0.6, &[1.5], &[4.0])),
        (pt(1.2, &[-1.0], &[2.0]), pt(0.4, &[1.0], &[2.5])),
        (pt(0.3, &[0.0], &[0.0]), pt(0.3, &[0.2], &[3.5])),
    ] {
        let geo = solve_geodesic_with(&s, &p, &q, &cfg).map_err(|e| e.to_string())?;
        let n = (geo.distance / 0.01).floor() as usize;
        let samples: Vec<(f64, f64)> =
            (0..=n).map(|i| (i as f64 * 0.01, point_at_arclength(&s, &geo.path, i as f64 * 0.01).unwrap().r.sinh())).collect();
        let rep = fk_convexity(&samples, -1.0, DEFAULT_WINDOW, SOLVER_MARGIN).map_err(|e| e.to_string())?;
        ensure(rep.passed, format!("sinh-distance-to-core: {} violations", rep.violation_count))?;
        sinh_max = sinh_max.max(rep.max_deficit);
    }

    let sin: Vec<(f64, f64)> = (0..=200).map(|i| 0.1 + (PI - 0.2) * i as f64 / 200.0).map(|t| (t, t.sin())).collect();
    let sin_rep = fk_convexity(&sin, -1.0, DEFAULT_WINDOW, EXACT_MARGIN).map_err(|e| e.to_string())?;
    ensure(!sin_rep.passed && !sin_rep.violations.is_empty(), "sin was not rejected")?;
    Ok(format!(
        "cosh max deficit {:.1e}; sinh-to-core max deficit {sinh_max:.1e} (margin {SOLVER_MARGIN:.0e}); sin rejected with {} violations, max deficit {:.2e}",
        cosh_rep.max_deficit, sin_rep.violation_count, sin_rep.max_deficit
    ))
}

fn filling(n: usize, dims: &[usize]) -> FillingSpec {
    let cusps = dims
        .iter()
        .map(|&d| {
            let coeffs = (0..d).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
            CuspSpec::new(LatticeTorus::square(n, 7.0).unwrap(), coeffs).unwrap()
        })
        .collect();
    FillingSpec::new(n, cusps).unwrap()
}

fn c7_cohomology_table() -> Outcome {
    let mut cases = 0;
    for n in 2..=5i32 {
        for s in 1..=n {
            let spec = filling(n as usize, &(1..=s as usize).collect::<Vec<_>>());
            let g = group_cohomology(&spec).map_err(|e| e.to_string())?;
            for q in -1..=n + 3 {
                let want = if q == n + 1 {
                    Rank::Finite(1)
                } else if (n - s + 2..=n).contains(&q) {
                    Rank::Infinite
                } else {
                    Rank::Finite(0)
                };
                ensure(g.group.rank(q) == want, format!("n={n} s={s} q={q}: {} vs {want}", g.group.rank(q)))?;
            }
            let seq = shell_sequence(&spec, &round_robin(&spec, 4)).map_err(|e| e.to_string())?;
            ensure(seq.colimit == g.boundary, format!("n={n} s={s}: colimit {} vs {}", seq.colimit, g.boundary))?;
            cases += 1;
        }
    }
    let g = |n, s| group_cohomology_table(n, s).0.to_string();
    ensure(g(2, 1) == "{3:1}", format!("n=2 s=1: {}", g(2, 1)))?;
    ensure(g(3, 2) == "{3:INFINITE, 4:1}", format!("n=3 s=2: {}", g(3, 2)))?;
    ensure(g(3, 3) == "{2:INFINITE, 3:INFINITE, 4:1}", format!("n=3 s=3: {}", g(3, 3)))?;
    Ok(format!("{cases} (n, s) cases, table and round-robin colimits agree; worked cases {} / {} / {}", g(2, 1), g(3, 2), g(3, 3)))
}

fn c8_classification() -> Outcome {
    let expect = [
        (2, vec![1, 1], [true, true, true, true, true], vec![]),
        (4, vec![2], [false, false, false, true, true], vec![2]),
        (3, vec![3], [false, false, true, false, false], vec![]),
    ];
    for (n, dims, want, flats) in expect {
        let r = classify(&filling(n, &dims)).map_err(|e| e.to_string())?;
        let f = &r.flags;
        let got = [f.is_manifold, f.is_pd_group, f.cat_minus_one, f.simply_connected_at_infinity, f.systolic_excluded];
        ensure(got == want && f.isolated_flats, format!("n={n} dims={dims:?}: {got:?}"))?;
        ensure(f.flat_dims_present.iter().copied().collect::<Vec<_>>() == flats, format!("n={n}: flats {:?}", f.flat_dims_present))?;
    }
    Ok("three worked specs reproduce manifold/PD/CAT(-1)/flats/sc∞/systolic flags".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("1 warping functions", Duration::from_secs(1), c1_warp_functions),
        ("2 model isometry", Duration::from_secs(30), c2_model_isometry),
        ("3 direction formula", Duration::from_secs(60), c3_direction_formula),
        ("4 curvature oracle", Duration::from_secs(60), c4_curvature_oracle),
        ("5 CAT campaign", Duration::from_secs(300), c5_cat_campaign),
        ("6 FK-convexity", Duration::from_secs(30), c6_fk_convexity),
        ("7 cohomology table", Duration::from_secs(5), c7_cohomology_table),
        ("8 classification flags", Duration::from_secs(1), c8_classification),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("[{}] {name} ({:.2}s / {}s): {detail}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64(), budget.as_secs());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
