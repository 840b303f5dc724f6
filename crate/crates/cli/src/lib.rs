//! Batch front end: each subcommand runs one campaign and produces a
//! [`ReportDocument`] whose summary decides the exit code.

use std::fmt;
use std::path::{Path, PathBuf};

use catfill::curvature_lab::{
    cat_campaign, cat_test_multi, curvature_scan, fk_convexity, ChartBox, ScanGrid, CAT_TOLERANCE, DEFAULT_WINDOW, EXACT_MARGIN, SOLVER_MARGIN,
};
use catfill::filling_topology::{classify, round_robin, shell_sequence, CohomologyProfile, FillingSpec};
use catfill::model_spaces::{halfplane_distance, horo_to_halfplane};
use catfill::warp_engine::{
    alexandrov_angle, direction_at_singular, point_at_arclength, solve_geodesic_with, SolverConfig, WPoint, WarpedSpace, DEFAULT_SCALES,
};
use catfill::warp_functions::{build_fg, AnalyticWarp, Side, Warp};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = "catfill";

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "catfill", version, about = "Warped-product geometry and filling invariants")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Report path; written atomically. Standard output if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Build the warping pair (f, g) and check knots and convexity.
    WarpBuild(WarpBuildArgs),
    /// Solve one geodesic, or run an isometry or direction campaign.
    Geodesic(GeodesicArgs),
    /// CAT(κ) comparison on one triangle or a random campaign.
    CatTest(CatArgs),
    /// Tabulate curvature terms with finite-difference spot checks.
    CurvatureScan(ScanArgs),
    /// Barrier check of u'' + K u ≥ 0 on sampled values.
    FkCheck(FkArgs),
    /// Cohomology, shell colimits and classification flags of a filling.
    FillingAnalyze(FillingArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WarpBuildArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Grid intervals for the convexity check and the CSV table.
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    /// Largest accepted knot mismatch.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Start point as `r,e..,θ..`.
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    /// Random pairs checked against the half-plane distance (horoball chart only).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid size of the direction-formula campaign (standard singular model only).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CatArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Comparison curvatures, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub kappa: Vec<f64>,
    /// Point pairs sampled on each triangle.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Vertices `p;q;r` of a single triangle.
    #[arg(long, allow_hyphen_values = true)]
    pub vertices: Option<String>,
    /// Chart box `lo..;hi..` for a random campaign.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub chart_box: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub triangles: usize,
    #[arg(long, default_value_t = CAT_TOLERANCE)]
    pub tol: f64,
    /// Pass only if every κ is violated by more than `tol`.
    #[arg(long)]
    pub expect_violation: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Number of r grid points.
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    /// Number of finite-difference spot checks.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FkArgs {
    /// `sin`, `cosh-distance:<point>`, `sinh-core`, or `csv:<path>` with `t,u` rows.
    #[arg(long, allow_hyphen_values = true)]
    pub function: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub kappa: f64,
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    /// Sample intervals along the curve.
    #[arg(long, default_value_t = 300)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: f64,
    /// Deficit margin; defaults depend on whether samples come from the solver.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub expect_violation: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FillingArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// JSON list of per-shell cusp lists, or `round-robin:<shells>`.
    #[arg(long, default_value = "round-robin:4")]
    pub schedule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub summary: Summary,
}

/// A finished run: the report, its rendering in the requested format and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: ReportDocument,
    pub rendered: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or input files; exit code 2.
    Input(String),
    /// A library routine failed during the campaign; exit code 1.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Runtime(m) => write!(f, "run failed: {m}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn input(context: impl fmt::Display) -> impl FnOnce(catfill::Error) -> CliError {
    move |e| CliError::Input(format!("{context}: {e}"))
}

fn runtime(e: catfill::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, flag: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("--{flag} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("--{flag} {}: {e}", path.display())))
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| CliError::Input(format!("--{flag} is required")))
}

fn point(space: &WarpedSpace, text: &str, flag: &str) -> CliResult<WPoint> {
    space.parse_point(text).map_err(input(format!("--{flag} {text:?}")))
}

fn solver(seed: u64) -> SolverConfig {
    SolverConfig { seed, ..SolverConfig::default() }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

struct Payload {
    results: Value,
    checks: Vec<Check>,
    csv: Option<String>,
    text: Option<String>,
}

/// Runs one subcommand.
pub fn run(config: &RunConfig) -> CliResult<Outcome> {
    let (name, payload) = match &config.command {
        Command::WarpBuild(a) => ("warp-build", warp_build(a)?),
        Command::Geodesic(a) => ("geodesic", geodesic(a, config.seed)?),
        Command::CatTest(a) => ("cat-test", cat(a, config.seed)?),
        Command::CurvatureScan(a) => ("curvature-scan", scan(a, config.seed)?),
        Command::FkCheck(a) => ("fk-check", fk(a, config.seed)?),
        Command::FillingAnalyze(a) => ("filling-analyze", filling(a)?),
    };
    let passed = payload.checks.iter().all(|c| c.passed);
    let report = ReportDocument {
        tool: TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: name.to_string(),
        config: to_value(config),
        results: payload.results,
        summary: Summary { passed, checks: payload.checks },
    };
    let rendered = match config.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => payload.csv.ok_or_else(|| CliError::Input(format!("--format csv is not available for {name}")))?,
        Format::Text => match payload.text {
            Some(t) => t,
            None => render_summary(&report),
        },
    };
    Ok(Outcome { code: if passed { 0 } else { 1 }, report, rendered })
}

fn render_summary(report: &ReportDocument) -> String {
    let mut out = format!("{} {}\n", report.command, if report.summary.passed { "PASS" } else { "FAIL" });
    for c in &report.summary.checks {
        out.push_str(&format!("  [{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    out
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    use std::io::Write;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn warp_build(a: &WarpBuildArgs) -> CliResult<Payload> {
    if a.grid == 0 || !(a.tol > 0.0) {
        return Err(CliError::Input("--grid and --tol must be positive".into()));
    }
    let fg = build_fg(a.lambda, a.delta0).map_err(input("--lambda/--delta0"))?;
    let end = 1.0 + a.lambda;
    let step = end / a.grid as f64;
    let mismatch = fg.f.knot_mismatch().max(fg.g.knot_mismatch());
    let f_min = fg.f.grid_min_second(step, end, step);
    let g_min = fg.g.grid_min_second(0.0, end, step);
    let exact = [0.5 * fg.delta, fg.delta].iter().all(|&r| {
        let e = |w: &catfill::warp_functions::SmoothWarpFunction, o| w.eval(r, o, Side::Left).unwrap_or(f64::NAN);
        e(&fg.f, 0) == r.sinh() && e(&fg.g, 0) == r.cosh()
    }) && [end - 0.5 * (a.lambda / 2.0), end].iter().all(|&r| {
        let v = (r - 1.0).exp();
        fg.f.eval(r, 0, Side::Left).ok() == Some(v) && fg.g.eval(r, 0, Side::Left).ok() == Some(v)
    });
    let checks = vec![
        Check::new("knot_mismatch", mismatch < a.tol, format!("{mismatch:.3e} < {:.1e}", a.tol)),
        Check::new("f_convex", f_min > 0.0, format!("grid min f'' = {f_min:.6e}")),
        Check::new("g_floor", g_min >= fg.kappa_floor && fg.kappa_floor > 0.0, format!("grid min g'' = {g_min:.6e}, kappa_floor = {:.6e}", fg.kappa_floor)),
        Check::new("boundary_pieces", exact, "sinh/cosh below delta, e^(r-1) on the tail"),
    ];
    Ok(Payload { results: to_value(&fg), checks, csv: Some(fg.sample_table(a.grid)), text: None })
}

fn is_unit_horoball(space: &WarpedSpace) -> bool {
    space.euclid_dim == 1
        && space.torus.is_none()
        && matches!(space.warp_g, Warp::Analytic(AnalyticWarp::ExpShift { shift, rate }) if shift == 0.0 && rate == 1.0)
}

fn geodesic(a: &GeodesicArgs, seed: u64) -> CliResult<Payload> {
    let space: WarpedSpace = read_json(&a.space, "space")?;
    let cfg = solver(seed);
    if let Some(n) = a.samples {
        return isometry_campaign(&space, n, a.tol.unwrap_or(1e-4), seed, &cfg);
    }
    if let Some(n) = a.grid {
        return direction_campaign(&space, n, a.tol.unwrap_or(1e-2), &cfg);
    }
    let p = point(&space, need(&a.from, "from")?, "from")?;
    let q = point(&space, need(&a.to, "to")?, "to")?;
    let geo = solve_geodesic_with(&space, &p, &q, &cfg).map_err(runtime)?;
    let checks = vec![
        Check::new("converged", geo.converged, format!("residual {:.3e} after {} iterations", geo.residual, geo.iterations)),
        Check::new("refined", geo.refined, format!("{} segments", geo.segments)),
    ];
    let mut csv = String::from("r");
    for i in 0..space.euclid_dim {
        csv.push_str(&format!(",e{i}"));
    }
    for i in 0..space.torus_dim() {
        csv.push_str(&format!(",theta{i}"));
    }
    csv.push('\n');
    for v in &geo.path.vertices {
        let row: Vec<String> = v.coords().iter().map(|x| format!("{x:.17e}")).collect();
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    Ok(Payload { results: to_value(&geo), checks, csv: Some(csv), text: None })
}

fn isometry_campaign(space: &WarpedSpace, n: usize, tol: f64, seed: u64, cfg: &SolverConfig) -> CliResult<Payload> {
    if !is_unit_horoball(space) {
        return Err(CliError::Input("--samples needs the chart ℝ ×_{e^r} E¹ (warp_g exp_shift with shift 0, rate 1, one Euclidean factor)".into()));
    }
    let [lo, hi] = space.interval;
    let (rlo, rhi) = ((-2.0f64).max(lo), 2.0f64.min(hi));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut draws = 0;
    while rows.len() < n {
        draws += 1;
        if draws > 100 * n.max(1) {
            return Err(CliError::Input("could not draw pairs at distance ≤ 5 inside the interval".into()));
        }
        let p = WPoint::new(rng.gen_range(rlo..rhi), vec![rng.gen_range(-3.0..3.0)], vec![]);
        let q = WPoint::new(rng.gen_range(rlo..rhi), vec![rng.gen_range(-3.0..3.0)], vec![]);
        let oracle = halfplane_distance(horo_to_halfplane(p.r, p.e[0]), horo_to_halfplane(q.r, q.e[0])).map_err(runtime)?;
        if oracle > 5.0 {
            continue;
        }
        let d = solve_geodesic_with(space, &p, &q, cfg).map_err(runtime)?.distance;
        rows.push((p, q, d, oracle));
    }
    let max_err = rows.iter().map(|(_, _, d, o)| (d - o).abs()).fold(0.0, f64::max);
    let mut csv = String::from("r_p,e_p,r_q,e_q,solver,halfplane,error\n");
    for (p, q, d, o) in &rows {
        csv.push_str(&format!("{:.17e},{:.17e},{:.17e},{:.17e},{d:.17e},{o:.17e},{:.3e}\n", p.r, p.e[0], q.r, q.e[0], (d - o).abs()));
    }
    let pairs: Vec<Value> = rows.iter().map(|(p, q, d, o)| json!({"p": p, "q": q, "solver": d, "halfplane": o})).collect();
    Ok(Payload {
        results: json!({"pairs": pairs, "max_error": max_err}),
        checks: vec![Check::new("halfplane_isometry", max_err <= tol, format!("max |d - d_H| = {max_err:.3e} over {n} pairs, tol {tol:.1e}"))],
        csv: Some(csv),
        text: None,
    })
}

fn direction_campaign(space: &WarpedSpace, n: usize, tol: f64, cfg: &SolverConfig) -> CliResult<Payload> {
    if !space.is_standard_singular() || space.euclid_dim != 1 {
        return Err(CliError::Input("--grid needs the standard singular model with one Euclidean factor".into()));
    }
    if n < 2 {
        return Err(CliError::Input("--grid must be at least 2".into()));
    }
    let a0 = 0.0;
    let theta: Vec<f64> = vec![0.0; space.torus_dim()];
    let p = WPoint::new(space.r_min(), vec![a0], theta.clone());
    let e_ray = WPoint::new(space.r_min(), vec![a0 + 1.0], theta.clone());
    let grid = |i: usize| 0.2 + 0.8 * i as f64 / (n - 1) as f64;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (t1, sep) = (grid(i), grid(j));
            let target = WPoint::new(space.r_min() + t1, vec![a0 + sep], theta.iter().map(|x| x + 3.0).collect());
            let est = alexandrov_angle(space, &p, &target, &e_ray, &DEFAULT_SCALES, cfg).map_err(runtime)?;
            let phi = direction_at_singular(space, &[a0], &target).map_err(runtime)?.phi;
            rows.push((t1, sep, phi, est));
        }
    }
    let max_err = rows.iter().map(|(_, _, phi, est)| (est.angle - phi).abs()).fold(0.0, f64::max);
    let mut csv = String::from("t1,separation,formula,estimate,error\n");
    for (t1, sep, phi, est) in &rows {
        csv.push_str(&format!("{t1:.6},{sep:.6},{phi:.17e},{:.17e},{:.3e}\n", est.angle, (est.angle - phi).abs()));
    }
    let cells: Vec<Value> = rows.iter().map(|(t1, sep, phi, est)| json!({"t1": t1, "separation": sep, "formula": phi, "estimate": est})).collect();
    Ok(Payload {
        results: json!({"grid": cells, "max_error": max_err}),
        checks: vec![Check::new("direction_formula", max_err <= tol, format!("max |angle - φ| = {max_err:.3e} over {} cells, tol {tol:.1e}", rows.len()))],
        csv: Some(csv),
        text: None,
    })
}

fn parse_box(text: &str, dim: usize) -> CliResult<ChartBox> {
    let parts: Vec<&str> = text.split(';').collect();
    let nums = |s: &str| -> CliResult<Vec<f64>> {
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| CliError::Input(format!("--box {text:?}: {x:?}: {e}")))).collect()
    };
    if parts.len() != 2 {
        return Err(CliError::Input(format!("--box {text:?}: expected `lo..;hi..`")));
    }
    let (lower, upper) = (nums(parts[0])?, nums(parts[1])?);
    if lower.len() != dim || upper.len() != dim || lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
        return Err(CliError::Input(format!("--box {text:?}: need {dim} increasing coordinate ranges")));
    }
    Ok(ChartBox { lower, upper })
}

fn cat(a: &CatArgs, seed: u64) -> CliResult<Payload> {
    let space: WarpedSpace = read_json(&a.space, "space")?;
    let cfg = solver(seed);
    if a.kappa.is_empty() || !(a.tol > 0.0) {
        return Err(CliError::Input("--kappa needs at least one value and --tol must be positive".into()));
    }
    let reports = match (&a.vertices, &a.chart_box) {
        (Some(v), None) => {
            let pts: Vec<WPoint> = v.split(';').map(|s| point(&space, s, "vertices")).collect::<CliResult<_>>()?;
            let tri: [WPoint; 3] = pts.try_into().map_err(|_| CliError::Input(format!("--vertices {v:?}: expected three points")))?;
            let reps = cat_test_multi(&space, &tri, &a.kappa, a.samples, seed, &cfg).map_err(runtime)?;
            (reps.clone(), json!({"reports": reps}))
        }
        (None, Some(b)) => {
            let chart = parse_box(b, space.chart_dim())?;
            let c = cat_campaign(&space, &chart, a.triangles, &a.kappa, a.samples, seed, &cfg).map_err(runtime)?;
            (c.reports.clone(), to_value(&c))
        }
        _ => return Err(CliError::Input("give exactly one of --vertices or --box".into())),
    };
    let (reps, results) = reports;
    let checks = reps
        .iter()
        .map(|r| {
            let passed = if a.expect_violation { r.max_violation > a.tol } else { r.max_violation <= a.tol };
            let rel = if a.expect_violation { ">" } else { "≤" };
            Check::new(format!("cat({})", r.kappa), passed, format!("max violation {:.3e} {rel} {:.1e} over {} triangles", r.max_violation, a.tol, r.triangles_tested))
        })
        .collect();
    let mut csv = String::from("kappa,triangles,max_violation,passed\n");
    for r in &reps {
        csv.push_str(&format!("{},{},{:.17e},{}\n", r.kappa, r.triangles_tested, r.max_violation, r.max_violation <= a.tol));
    }
    Ok(Payload { results, checks, csv: Some(csv), text: None })
}

fn scan(a: &ScanArgs, seed: u64) -> CliResult<Payload> {
    let space: WarpedSpace = read_json(&a.space, "space")?;
    let report = curvature_scan(&space, &ScanGrid { points: a.grid, spot_checks: a.samples, seed }).map_err(input("--space/--grid"))?;
    let mut checks = vec![Check::new(
        "spot_checks_inside",
        report.spots_inside,
        format!("{} finite-difference checks within the term interval ± 1e-3", report.spot_checks.len()),
    )];
    if space.warp_f.as_smooth().is_some() && space.euclid_dim <= 1 {
        checks.push(Check::new("positive_kappa", report.empirical_kappa > 0.0, format!("empirical kappa {:.6e} on [{}, {}]", report.empirical_kappa, report.window[0], report.window[1])));
    }
    Ok(Payload { csv: Some(report.to_csv()), results: to_value(&report), checks, text: None })
}

fn fk(a: &FkArgs, seed: u64) -> CliResult<Payload> {
    if a.samples < 2 {
        return Err(CliError::Input("--samples must be at least 2".into()));
    }
    let geodesic_samples = |f: &dyn Fn(&WarpedSpace, &WPoint) -> CliResult<f64>| -> CliResult<Vec<(f64, f64)>> {
        let path = a.space.as_deref().ok_or_else(|| CliError::Input("--space is required for this function".into()))?;
        let space: WarpedSpace = read_json(path, "space")?;
        let p = point(&space, need(&a.from, "from")?, "from")?;
        let q = point(&space, need(&a.to, "to")?, "to")?;
        let geo = solve_geodesic_with(&space, &p, &q, &solver(seed)).map_err(runtime)?;
        (0..=a.samples)
            .map(|i| {
                let t = geo.distance * i as f64 / a.samples as f64;
                let x = point_at_arclength(&space, &geo.path, t).map_err(runtime)?;
                Ok((t, f(&space, &x)?))
            })
            .collect()
    };
    let (samples, default_margin) = match a.function.split_once(':').unwrap_or((a.function.as_str(), "")) {
        ("sin", "") => {
            let t = |i: usize| 0.1 + (std::f64::consts::PI - 0.2) * i as f64 / a.samples as f64;
            ((0..=a.samples).map(|i| (t(i), t(i).sin())).collect(), EXACT_MARGIN)
        }
        ("sinh-core", "") => (geodesic_samples(&|s, x| Ok((x.r - s.r_min()).sinh()))?, SOLVER_MARGIN),
        ("cosh-distance", target) => {
            let f = |s: &WarpedSpace, x: &WPoint| -> CliResult<f64> {
                let y = point(s, target, "function")?;
                Ok(solve_geodesic_with(s, x, &y, &solver(seed)).map_err(runtime)?.distance.cosh())
            };
            (geodesic_samples(&f)?, SOLVER_MARGIN)
        }
        ("csv", path) => (read_samples(Path::new(path))?, EXACT_MARGIN),
        _ => return Err(CliError::Input(format!("--function {:?}: expected sin, sinh-core, cosh-distance:<point> or csv:<path>", a.function))),
    };
    let margin = a.tol.unwrap_or(default_margin);
    let report = fk_convexity(&samples, a.kappa, a.window, margin).map_err(input("--samples/--window/--kappa"))?;
    let passed = if a.expect_violation { !report.passed } else { report.passed };
    let detail = format!("{} violations over {} pairs, max deficit {:.3e}, margin {:.1e}", report.violation_count, report.pairs_checked, report.max_deficit, margin);
    let mut csv = String::from("a,b,t,deficit\n");
    for v in &report.violations {
        csv.push_str(&format!("{:.17e},{:.17e},{:.17e},{:.17e}\n", v.a, v.b, v.t, v.deficit));
    }
    Ok(Payload {
        results: json!({"report": report, "samples": samples}),
        checks: vec![Check::new(if a.expect_violation { "fk_violated" } else { "fk_convex" }, passed, detail)],
        csv: Some(csv),
        text: None,
    })
}

fn read_samples(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("--function csv:{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.chars().any(|c| c.is_ascii_alphabetic())) {
            continue;
        }
        let bad = |m: String| CliError::Input(format!("{} line {}: {m}", path.display(), i + 1));
        let mut cols = line.split(',').map(str::trim);
        let mut next = || -> CliResult<f64> {
            let c = cols.next().ok_or_else(|| bad("expected two columns `t,u`".into()))?;
            c.parse().map_err(|e| bad(format!("{c:?}: {e}")))
        };
        out.push((next()?, next()?));
    }
    Ok(out)
}

fn parse_schedule(text: &str, spec: &FillingSpec) -> CliResult<Vec<Vec<usize>>> {
    if let Some(n) = text.strip_prefix("round-robin:") {
        let shells: usize = n.parse().map_err(|e| CliError::Input(format!("--schedule {text:?}: {e}")))?;
        return Ok(round_robin(spec, shells));
    }
    read_json(Path::new(text), "schedule")
}

fn filling(a: &FillingArgs) -> CliResult<Payload> {
    let spec: FillingSpec = read_json(&a.spec, "spec")?;
    let schedule = parse_schedule(&a.schedule, &spec)?;
    let report = classify(&spec).map_err(input("--spec"))?;
    let shells = shell_sequence(&spec, &schedule).map_err(input("--schedule"))?;
    let mut checks: Vec<Check> = report
        .cusps
        .iter()
        .enumerate()
        .map(|(i, c)| Check::new(format!("cusp{i}_two_pi"), c.two_pi_ok, format!("systole {:.6} vs 2π", c.systole)))
        .collect();
    checks.push(Check::new(
        "colimit_matches_table",
        shells.colimit == report.boundary_cohomology,
        format!("colimit {} vs boundary {}", shells.colimit, report.boundary_cohomology),
    ));
    let rank = |p: &CohomologyProfile, q: i32| p.rank(q).to_string();
    let mut csv = String::from("q,group,boundary,colimit\n");
    for q in 0..=spec.n as i32 + 1 {
        csv.push_str(&format!("{q},{},{},{}\n", rank(&report.group_cohomology, q), rank(&report.boundary_cohomology, q), rank(&shells.colimit, q)));
    }
    let text = report.to_string();
    Ok(Payload { results: json!({"report": report, "schedule": schedule, "shells": shells}), checks, csv: Some(csv), text: Some(text) })
}
