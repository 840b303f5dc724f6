use thiserror::Error;

/// Errors raised by the geometry and topology routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("slope order violated: first slope {first} must be below second slope {second}")]
    SlopeOrder { first: f64, second: f64 },

    #[error("lines cross at x = {crossing}, outside the open interval ({a}, {b})")]
    IntersectionOutside { crossing: f64, a: f64, b: f64 },

    #[error("pieces do not agree to first order at r = {at}: value gap {value_gap:e}, slope gap {slope_gap:e}")]
    Mismatch { at: f64, value_gap: f64, slope_gap: f64 },

    #[error("r = {r} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error("point outside the upper half-plane (imaginary part {im})")]
    Domain { im: f64 },

    #[error("side lengths ({0}, {1}, {2}) do not form a triangle")]
    Degenerate(f64, f64, f64),

    #[error("arclength {arclength} outside [0, {length}]")]
    OutOfRange { arclength: f64, length: f64 },

    #[error("geodesic solver failed: {0}")]
    SolverFailure(String),

    #[error("warping function is not positive at t = {t}")]
    NonpositiveWarp { t: f64 },

    #[error("point at r = {r} lies on the singular set")]
    SingularPoint { r: f64 },

    #[error("barrier window {window} does not exceed the largest sample gap {gap}")]
    WindowTooSmall { window: f64, gap: f64 },

    #[error("filling coefficients have rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("join of two empty spaces")]
    Empty,

    #[error("profile has rank {found} in top degree {top}, expected 1")]
    TopMismatch { top: i32, found: String },

    #[error("shell schedule is empty")]
    ScheduleEmpty,

    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
