use catfill::model_spaces::*;
use catfill::quadrature::integrate;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hyperbolic length of a parametrised curve, integrating |z'| / Im z.
fn curve_length(z: impl Fn(f64) -> Complex64, dz: impl Fn(f64) -> Complex64, a: f64, b: f64) -> f64 {
    integrate(|s| dz(s).norm() / z(s).im, a, b, 1e-13, 0.0)
}

#[test]
fn vertical_segment_integrates_dy_over_y() {
    let oracle = curve_length(|y| c(0.0, y), |_| c(0.0, 1.0), 1.0, 2.0);
    assert!((oracle - 2f64.ln()).abs() < 1e-13);
    let d = halfplane_distance(c(0.0, 1.0), c(0.0, 2.0)).unwrap();
    assert!((d - oracle).abs() < 1e-13);
}

#[test]
fn horizontal_pair_matches_geodesic_arc() {
    // the geodesic through i and 1+i is the circle |z - 1/2| = sqrt(5)/2
    let (centre, radius) = (0.5, 1.25f64.sqrt());
    let s0 = (1.0 / radius).asin();
    let s1 = PI - s0;
    let oracle = curve_length(
        |s| c(centre - radius * s.cos(), radius * s.sin()),
        |s| c(radius * s.sin(), radius * s.cos()),
        s0,
        s1,
    );
    let d = halfplane_distance(c(0.0, 1.0), c(1.0, 1.0)).unwrap();
    assert!((d - oracle).abs() < 1e-12, "{d} vs {oracle}");
    assert!((d - 1.5f64.acosh()).abs() < 1e-15);
}

#[test]
fn strip_map_pulls_back_the_warped_metric() {
    // |h_t|² / Im² = 1 and |h_a|² / Im² = (u cosh t)², h_t ⟂ h_a
    let (u, h) = (0.7, 1e-6);
    for &(t, a) in &[(0.0, 0.0), (0.4, -1.0), (1.3, 2.0)] {
        let z = strip_to_halfplane(t, a, u);
        let zt = (strip_to_halfplane(t + h, a, u) - strip_to_halfplane(t - h, a, u)) / (2.0 * h);
        let za = (strip_to_halfplane(t, a + h, u) - strip_to_halfplane(t, a - h, u)) / (2.0 * h);
        let y2 = z.im * z.im;
        assert!((zt.norm_sqr() / y2 - 1.0).abs() < 1e-8);
        assert!((za.norm_sqr() / y2 - (u * t.cosh()).powi(2)).abs() < 1e-8);
        assert!((zt.re * za.re + zt.im * za.im).abs() / y2 < 1e-8);
    }
}

#[test]
fn horo_chart_is_isometric() {
    // dr² + e^(2r) dx² against |dz|²/y² with z = x + i e^(-r)
    let h = 1e-6;
    for &(r, x) in &[(0.0, 0.0), (-1.5, 2.0), (2.0, -0.3)] {
        let z = horo_to_halfplane(r, x);
        let zr = (horo_to_halfplane(r + h, x) - horo_to_halfplane(r - h, x)) / (2.0 * h);
        let zx = (horo_to_halfplane(r, x + h) - horo_to_halfplane(r, x - h)) / (2.0 * h);
        let y2 = z.im * z.im;
        assert!((zr.norm_sqr() / y2 - 1.0).abs() < 1e-8);
        assert!((zx.norm_sqr() / y2 - (2.0 * r).exp()).abs() < 1e-8 * (2.0 * r).exp());
    }
}

#[test]
fn equilateral_vertex_angle_from_law_of_cosines() {
    let oracle = ((1f64.cosh().powi(2) - 1f64.cosh()) / 1f64.sinh().powi(2)).acos();
    let tri = comparison_triangle(-1.0, 1.0, 1.0, 1.0).unwrap();
    for i in 0..3 {
        assert!((tri.angle_at(i) - oracle).abs() < 1e-12);
    }
    assert!((oracle - 0.9189).abs() < 5e-4);
}

#[test]
fn equilateral_midpoints_are_closer_than_half() {
    let tri = comparison_triangle(-1.0, 1.0, 1.0, 1.0).unwrap();
    // sides 0 and 1 meet at vertex 1; midpoints at 1/2 from it
    let m0 = tri.point(0, 0.5).unwrap();
    let m1 = tri.point(1, 0.5).unwrap();
    let d = tri.distance(&m0, &m1);
    let gamma = tri.angle_at(1);
    let oracle = (0.5f64.cosh().powi(2) - 0.5f64.sinh().powi(2) * gamma.cos()).acosh();
    assert!((d - oracle).abs() < 1e-12, "{d} vs {oracle}");
    assert!(d < 0.5);
    let flat = comparison_triangle(0.0, 1.0, 1.0, 1.0).unwrap();
    let e = flat.distance(&flat.point(0, 0.5).unwrap(), &flat.point(1, 0.5).unwrap());
    assert!((e - 0.5).abs() < 1e-15);
}

#[test]
fn torus_examples() {
    let sq = LatticeTorus::square(2, 7.0).unwrap();
    assert_eq!(torus_distance(&sq, &[0.0, 0.0], &[0.0, 0.0]), 0.0);
    assert_eq!(torus_distance(&sq, &[0.0, 0.0], &[6.0, 0.0]), 1.0);
    assert_eq!(torus_systole(&sq), 7.0);
}

/// Box radius covering every lattice vector of length <= `len`, from the
/// smallest Gram eigenvalue of a 2x2 basis in closed form.
fn covering_radius(basis: &[[f64; 2]; 2], len: f64) -> i64 {
    let g = |i: usize, j: usize| basis[i][0] * basis[j][0] + basis[i][1] * basis[j][1];
    let (tr, det) = (g(0, 0) + g(1, 1), g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
    let lmin = 0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt());
    (len / lmin.sqrt()).ceil() as i64 + 1
}

fn brute_force_distance(basis: &[[f64; 2]; 2], x: [f64; 2], y: [f64; 2], box_radius: i64) -> f64 {
    let mut best = f64::INFINITY;
    for i in -box_radius..=box_radius {
        for j in -box_radius..=box_radius {
            let v = [
                x[0] - y[0] + i as f64 * basis[0][0] + j as f64 * basis[1][0],
                x[1] - y[1] + i as f64 * basis[0][1] + j as f64 * basis[1][1],
            ];
            best = best.min(v[0].hypot(v[1]));
        }
    }
    best
}

fn brute_force_systole(basis: &[[f64; 2]; 2], box_radius: i64) -> f64 {
    let mut best = f64::INFINITY;
    for i in -box_radius..=box_radius {
        for j in -box_radius..=box_radius {
            if (i, j) != (0, 0) {
                let v = [i as f64 * basis[0][0] + j as f64 * basis[1][0], i as f64 * basis[0][1] + j as f64 * basis[1][1]];
                best = best.min(v[0].hypot(v[1]));
            }
        }
    }
    best
}

#[test]
fn hexagonal_distance_against_enumeration() {
    let basis = [[1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
    let t = LatticeTorus::new(basis.iter().map(|r| r.to_vec()).collect()).unwrap();
    let y = [0.75, 3f64.sqrt() / 4.0];
    let oracle = brute_force_distance(&basis, [0.0, 0.0], y, 3);
    assert!((t.distance(&[0.0, 0.0], &y) - oracle).abs() < 1e-15);
    assert!((oracle - 0.5).abs() < 1e-15);
}

#[test]
fn skewed_systole_against_enumeration() {
    let basis = [[10.0, 0.0], [5.0, 0.5]];
    let t = LatticeTorus::new(basis.iter().map(|r| r.to_vec()).collect()).unwrap();
    let oracle = brute_force_systole(&basis, 4);
    assert_eq!(oracle, 1.0);
    assert!((t.systole() - oracle).abs() < 1e-12);
    assert!((t.injectivity_radius() - 0.5).abs() < 1e-12);
}

#[test]
fn join_examples() {
    let line = |x: &f64, y: &f64| (x - y).abs();
    let p = JoinPoint { phi: 0.0, a_point: 0.2, b_point: 0.0 };
    let q = JoinPoint { phi: 0.0, a_point: 1.7, b_point: 3.0 };
    assert!((spherical_join_distance(&p, &q, line, line) - 1.5).abs() < 1e-12);
    let q = JoinPoint { phi: FRAC_PI_2, a_point: 1.7, b_point: 3.0 };
    assert!((spherical_join_distance(&p, &q, line, line) - FRAC_PI_2).abs() < 1e-12);
    let p = JoinPoint { phi: FRAC_PI_4, a_point: 0.0, b_point: 1.0 };
    let q = JoinPoint { phi: FRAC_PI_4, a_point: PI, b_point: 1.0 };
    assert!((spherical_join_distance(&p, &q, line, line) - FRAC_PI_2).abs() < 1e-12);
}

fn upper() -> impl Strategy<Value = Complex64> {
    (-5.0..5.0f64, 0.01..5.0f64).prop_map(|(x, y)| c(x, y))
}

fn lattice2() -> impl Strategy<Value = [[f64; 2]; 2]> {
    (1.0..4.0f64, -2.0..2.0f64, 0.5..4.0f64).prop_map(|(a, b, d)| [[a, 0.0], [b, d]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn halfplane_is_a_metric(z in upper(), w in upper(), v in upper()) {
        let d = |a, b| halfplane_distance(a, b).unwrap();
        prop_assert_eq!(d(z, w), d(w, z));
        prop_assert!(d(z, v) <= d(z, w) + d(w, v) + 1e-12);
        prop_assert!(d(z, w) >= 0.0);
    }

    #[test]
    fn join_of_circles_satisfies_triangle_inequality(
        phis in prop::array::uniform3(0.0..FRAC_PI_2),
        a in prop::array::uniform3(0.0..7.0f64),
        b in prop::array::uniform3(0.0..3.0f64),
    ) {
        let da = |x: &f64, y: &f64| circle_distance(*x, *y, 7.0);
        let db = |x: &f64, y: &f64| circle_distance(*x, *y, 3.0);
        let pts: Vec<_> = (0..3).map(|i| JoinPoint { phi: phis[i], a_point: a[i], b_point: b[i] }).collect();
        let d = |i: usize, j: usize| spherical_join_distance(&pts[i], &pts[j], da, db);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-10);
        prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-12);
    }

    #[test]
    fn torus_distance_is_bounded_by_chart_distance(basis in lattice2(), x in prop::array::uniform2(-3.0..3.0f64), y in prop::array::uniform2(-3.0..3.0f64)) {
        let t = LatticeTorus::new(basis.iter().map(|r| r.to_vec()).collect()).unwrap();
        let chart = (x[0] - y[0]).hypot(x[1] - y[1]);
        let d = t.distance(&x, &y);
        prop_assert!(d <= chart + 1e-12);
        if chart < 0.5 * t.systole() {
            prop_assert!((d - chart).abs() < 1e-12);
        }
        let radius = covering_radius(&basis, 2.0 * chart + basis[0][0].hypot(basis[0][1]) + basis[1][0].hypot(basis[1][1]));
        let oracle = brute_force_distance(&basis, x, y, radius);
        prop_assert!((d - oracle).abs() < 1e-12, "{} vs {}", d, oracle);
    }

    #[test]
    fn systole_matches_enumeration_and_scales(basis in lattice2(), s in 0.1..10.0f64) {
        let t = LatticeTorus::new(basis.iter().map(|r| r.to_vec()).collect()).unwrap();
        let oracle = brute_force_systole(&basis, covering_radius(&basis, basis[0][0].hypot(basis[0][1])));
        prop_assert!((t.systole() - oracle).abs() < 1e-12);
        prop_assert!((t.scaled(s).unwrap().systole() - s * t.systole()).abs() < 1e-10 * s * t.systole());
    }

    #[test]
    fn comparison_triangle_reproduces_sides(kappa in -4.0..0.0f64, a in 0.1..3.0f64, b in 0.1..3.0f64, frac in 0.0..1.0f64) {
        let lo = (a - b).abs();
        let c = lo + frac * (a + b - lo);
        prop_assume!(c > 1e-3);
        for k in [kappa, 0.0] {
            let tri = comparison_triangle(k, a, b, c).unwrap();
            for i in 0..3 {
                let d = tri.distance(&tri.vertices[i], &tri.vertices[(i + 1) % 3]);
                prop_assert!((d - tri.side_lengths[i]).abs() < 1e-10, "κ {} side {}: {} vs {}", k, i, d, tri.side_lengths[i]);
            }
        }
    }

    #[test]
    fn triangle_points_lie_on_sides(a in 0.2..2.0f64, b in 0.2..2.0f64, frac in 0.05..0.95f64, s in 0.0..1.0f64) {
        let lo = (a - b).abs();
        let c = lo + frac * (a + b - lo);
        let tri = comparison_triangle(-1.0, a, b, c).unwrap();
        let p = tri.point(0, s * a).unwrap();
        prop_assert!((tri.distance(&p, &tri.vertices[0]) - s * a).abs() < 1e-10);
        prop_assert!((tri.distance(&p, &tri.vertices[1]) - (1.0 - s) * a).abs() < 1e-10);
    }
}
