use serde::{Deserialize, Serialize};

use super::{EllipseArc, Splice};

/// One analytic (or spliced) piece of a warping function.
///
/// Every kind can be evaluated on the whole real line; the owning
/// [`super::SmoothWarpFunction`] decides where it applies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PieceKind {
    Sinh,
    Cosh,
    /// `e^(r - c)`
    ExpShift { c: f64 },
    /// `coeffs[0] + coeffs[1] r + coeffs[2] r^2 + ...`
    Polynomial { coeffs: Vec<f64> },
    EllipseArc(EllipseArc),
    MollifiedSplice(Splice),
}

impl PieceKind {
    pub fn eval(&self, r: f64, order: u8) -> f64 {
        match self {
            PieceKind::Sinh => {
                if order == 1 {
                    r.cosh()
                } else {
                    r.sinh()
                }
            }
            PieceKind::Cosh => {
                if order == 1 {
                    r.sinh()
                } else {
                    r.cosh()
                }
            }
            PieceKind::ExpShift { c } => (r - c).exp(),
            PieceKind::Polynomial { coeffs } => poly_eval(coeffs, r, order),
            PieceKind::EllipseArc(arc) => arc.eval(r, order),
            PieceKind::MollifiedSplice(s) => s.eval(r, order),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PieceKind::Sinh => "sinh",
            PieceKind::Cosh => "cosh",
            PieceKind::ExpShift { .. } => "exp_shift",
            PieceKind::Polynomial { .. } => "polynomial",
            PieceKind::EllipseArc(_) => "ellipse_arc",
            PieceKind::MollifiedSplice(_) => "mollified_splice",
        }
    }
}

fn poly_eval(coeffs: &[f64], r: f64, order: u8) -> f64 {
    let order = order as usize;
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(i, c)| {
            let falling: f64 = (0..order).map(|j| (i - j) as f64).product();
            c * falling * r.powi((i - order) as i32)
        })
        .sum()
}
