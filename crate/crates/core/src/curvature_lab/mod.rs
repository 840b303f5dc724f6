//! Curvature of warped products: the term bounds, a finite-difference
//! Riemann tensor, barrier-sense convexity, and CAT(κ) comparison.

mod cat;
mod fd;
mod fk;
mod scan;
mod terms;

pub use cat::{cat_campaign, cat_test, cat_test_multi, CampaignReport, ChartBox, ComparisonReport, WorstCase, CAT_TOLERANCE, MIN_SIDE};
pub use fd::{chart_metric, fd_sectional, fd_sectional_metric, fd_sectional_vectors, FD_STEP};
pub use fk::{fk_convexity, fk_solution, FKReport, Violation, DEFAULT_WINDOW, EXACT_MARGIN, SOLVER_MARGIN};
pub use scan::{curvature_scan, ScanGrid, ScanReport, ScanRow, SpotCheck, SPOT_TOLERANCE};
pub use terms::{sectional_terms, SectionalTerms, Term, TERM_LABELS};
