use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::integer::elementary_divisors;
use crate::error::{Error, Result};
use crate::model_spaces::LatticeTorus;

#[derive(Deserialize)]
struct RawCusp {
    basis: Vec<Vec<f64>>,
    filling_coeffs: Vec<Vec<i64>>,
}

/// A cusp cross-section `ℝ^n / Λ` with the filling sublattice spanned by
/// the integer combinations of `Λ`'s basis in the rows of `filling_coeffs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCusp")]
pub struct CuspSpec {
    #[serde(rename = "basis", serialize_with = "serialize_basis")]
    pub boundary_lattice: LatticeTorus,
    pub filling_coeffs: Vec<Vec<i64>>,
}

fn serialize_basis<S: serde::Serializer>(t: &LatticeTorus, s: S) -> std::result::Result<S::Ok, S::Error> {
    t.basis().serialize(s)
}

impl TryFrom<RawCusp> for CuspSpec {
    type Error = Error;

    fn try_from(raw: RawCusp) -> Result<Self> {
        Self::new(LatticeTorus::new(raw.basis)?, raw.filling_coeffs)
    }
}

impl CuspSpec {
    pub fn new(boundary_lattice: LatticeTorus, filling_coeffs: Vec<Vec<i64>>) -> Result<Self> {
        let n = boundary_lattice.dim();
        let d = filling_coeffs.len();
        if d == 0 || d > n {
            return Err(Error::Validation(format!("filling_coeffs has {d} rows, expected between 1 and {n}")));
        }
        if let Some(i) = filling_coeffs.iter().position(|r| r.len() != n) {
            return Err(Error::Validation(format!("filling_coeffs row {i} has length {}, expected {n}", filling_coeffs[i].len())));
        }
        let divisors = elementary_divisors(&filling_coeffs);
        if divisors.len() < d {
            return Err(Error::RankDeficient { rank: divisors.len(), expected: d });
        }
        if let Some(e) = divisors.iter().find(|&&e| e != 1) {
            return Err(Error::Validation(format!("filling sublattice is not primitive (elementary divisor {e})")));
        }
        Ok(Self { boundary_lattice, filling_coeffs })
    }

    /// Dimension `d` of the filling torus.
    pub fn torus_dim(&self) -> usize {
        self.filling_coeffs.len()
    }

    /// The filling torus with its induced flat metric.
    pub fn filling_torus(&self) -> Result<LatticeTorus> {
        let n = self.boundary_lattice.dim();
        let c = DMatrix::from_fn(self.torus_dim(), n, |i, j| self.filling_coeffs[i][j] as f64);
        LatticeTorus::from_gram(&(&c * self.boundary_lattice.gram() * c.transpose()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPiCheck {
    pub systole: f64,
    pub ok: bool,
}

/// Systole of the filling torus and whether it exceeds `2π`.
///
/// ```
/// use catfill::filling_topology::{two_pi_check, CuspSpec};
/// use catfill::model_spaces::LatticeTorus;
///
/// let cusp = CuspSpec::new(LatticeTorus::square(2, 7.0).unwrap(), vec![vec![1, 0]]).unwrap();
/// let check = two_pi_check(&cusp).unwrap();
/// assert!((check.systole - 7.0).abs() < 1e-12 && check.ok);
/// ```
pub fn two_pi_check(cusp: &CuspSpec) -> Result<TwoPiCheck> {
    let systole = cusp.filling_torus()?.systole();
    Ok(TwoPiCheck { systole, ok: systole > TAU })
}

#[derive(Deserialize)]
struct RawFilling {
    n: usize,
    cusps: Vec<CuspSpec>,
}

/// Fillings of a hyperbolic `(n+1)`-manifold's cusps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFilling")]
pub struct FillingSpec {
    pub n: usize,
    pub cusps: Vec<CuspSpec>,
}

impl TryFrom<RawFilling> for FillingSpec {
    type Error = Error;

    fn try_from(raw: RawFilling) -> Result<Self> {
        Self::new(raw.n, raw.cusps)
    }
}

impl FillingSpec {
    pub fn new(n: usize, cusps: Vec<CuspSpec>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(format!("n must be at least 2, got {n}")));
        }
        if cusps.is_empty() {
            return Err(Error::Validation("at least one cusp is required".into()));
        }
        if let Some(i) = cusps.iter().position(|c| c.boundary_lattice.dim() != n) {
            return Err(Error::Validation(format!("cusp {i} lattice has rank {}, expected {n}", cusps[i].boundary_lattice.dim())));
        }
        Ok(Self { n, cusps })
    }

    /// Largest filling torus dimension `s`.
    pub fn s(&self) -> usize {
        self.cusps.iter().map(CuspSpec::torus_dim).max().unwrap_or(0)
    }

    /// `(l, k) = (n - d, d)` for each cusp.
    pub fn core_dims(&self) -> Vec<(usize, usize)> {
        self.cusps.iter().map(|c| (self.n - c.torus_dim(), c.torus_dim())).collect()
    }
}
