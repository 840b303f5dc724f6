use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Deserialize)]
struct RawLattice {
    dim: usize,
    basis: Vec<Vec<f64>>,
}

/// Flat torus `ℝ^dim / Λ`, with `Λ` spanned by the rows of `basis`.
///
/// Points are Euclidean coordinates in `ℝ^dim`; the deck group acts by
/// integer combinations of basis rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct LatticeTorus {
    dim: usize,
    basis: Vec<Vec<f64>>,
    #[serde(skip_serializing)]
    gram: Vec<Vec<f64>>,
}

impl TryFrom<RawLattice> for LatticeTorus {
    type Error = Error;

    fn try_from(raw: RawLattice) -> Result<Self> {
        if raw.basis.len() != raw.dim {
            return Err(Error::Validation(format!("basis has {} rows, expected dim = {}", raw.basis.len(), raw.dim)));
        }
        Self::new(raw.basis)
    }
}

/// Calls `visit` for every integer vector in `[-radius, radius]^dim`.
pub fn for_each_in_box(dim: usize, radius: i64, mut visit: impl FnMut(&[i64])) {
    let mut c = vec![-radius; dim];
    loop {
        visit(&c);
        let mut i = 0;
        loop {
            if i == dim {
                return;
            }
            if c[i] < radius {
                c[i] += 1;
                break;
            }
            c[i] = -radius;
            i += 1;
        }
    }
}

impl LatticeTorus {
    pub fn new(basis: Vec<Vec<f64>>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::Validation("lattice basis is empty".into()));
        }
        if let Some(row) = basis.iter().position(|r| r.len() != dim) {
            return Err(Error::Validation(format!("basis row {row} has length {}, expected {dim}", basis[row].len())));
        }
        if basis.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Validation("basis entries must be finite".into()));
        }
        let gram: Vec<Vec<f64>> = basis
            .iter()
            .map(|u| basis.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            .collect();
        let out = Self { dim, basis, gram };
        let det = out.basis_matrix().determinant();
        let scale: f64 = out.basis.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).product();
        if !(det.abs() > 1e-12 * scale) {
            return Err(Error::Validation(format!("lattice basis is singular (determinant {det:e})")));
        }
        Ok(out)
    }

    /// Square lattice `side · ℤ^dim`.
    pub fn square(dim: usize, side: f64) -> Result<Self> {
        Self::new((0..dim).map(|i| (0..dim).map(|j| if i == j { side } else { 0.0 }).collect()).collect())
    }

    /// A lattice with the given Gram matrix (basis from its Cholesky factor).
    pub fn from_gram(gram: &DMatrix<f64>) -> Result<Self> {
        let chol = gram
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Validation("Gram matrix is not positive definite".into()))?;
        let l = chol.l();
        Self::new((0..l.nrows()).map(|i| l.row(i).iter().copied().collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.basis[i][j])
    }

    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.gram[i][j])
    }

    /// Largest deviation of the stored Gram matrix from `B Bᵀ`.
    pub fn gram_residual(&self) -> f64 {
        let b = self.basis_matrix();
        (b.clone() * b.transpose() - self.gram()).amax()
    }

    fn min_eigenvalue(&self) -> f64 {
        self.gram().symmetric_eigen().eigenvalues.min()
    }

    /// `Σ c_i b_i`.
    pub fn translation(&self, coeffs: &[i64]) -> Vec<f64> {
        (0..self.dim)
            .map(|j| coeffs.iter().zip(&self.basis).map(|(c, row)| *c as f64 * row[j]).sum())
            .collect()
    }

    /// Real coefficients `c` with `x = Σ c_i b_i`.
    pub fn coefficients(&self, x: &[f64]) -> Vec<f64> {
        let bt = self.basis_matrix().transpose();
        let sol = bt.lu().solve(&DVector::from_column_slice(x)).expect("basis checked nonsingular");
        sol.iter().copied().collect()
    }

    /// Representative of `x` with coefficients in `[0, 1)`.
    pub fn reduce(&self, x: &[f64]) -> Vec<f64> {
        let shift: Vec<i64> = self.coefficients(x).iter().map(|c| c.floor() as i64).collect();
        let t = self.translation(&shift);
        x.iter().zip(t).map(|(a, b)| a - b).collect()
    }

    /// Lattice coefficients of the nearest translate: `y + Σ c_i b_i` is
    /// closest to `x`.
    pub fn nearest_shift(&self, x: &[f64], y: &[f64]) -> (Vec<i64>, f64) {
        let w: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let base: Vec<i64> = self.coefficients(&w).iter().map(|c| c.round() as i64).collect();
        let t = self.translation(&base);
        let reduced: Vec<f64> = w.iter().zip(&t).map(|(a, b)| a - b).collect();
        let norm = reduced.iter().map(|v| v * v).sum::<f64>().sqrt();
        // any better translate c satisfies |c| sqrt(λ_min) <= |cᵀB| <= 2 |w'|
        let radius = (2.0 * norm / self.min_eigenvalue().sqrt()).floor() as i64;
        let mut best = (vec![0; self.dim], norm);
        for_each_in_box(self.dim, radius, |c| {
            let v = self.translation(c);
            let d = reduced.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if d < best.1 {
                best = (c.to_vec(), d);
            }
        });
        let coeffs = base.iter().zip(&best.0).map(|(a, b)| a + b).collect();
        (coeffs, best.1)
    }

    /// Flat distance between the images of `x` and `y`.
    ///
    /// ```
    /// use catfill::model_spaces::LatticeTorus;
    ///
    /// let t = LatticeTorus::square(2, 7.0).unwrap();
    /// assert_eq!(t.distance(&[0.0, 0.0], &[6.0, 0.0]), 1.0);
    /// ```
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.nearest_shift(x, y).1
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn systole(&self) -> f64 {
        let shortest = self.basis.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(f64::INFINITY, f64::min);
        let radius = (shortest / self.min_eigenvalue().sqrt()).floor() as i64;
        let mut best = shortest;
        for_each_in_box(self.dim, radius, |c| {
            if c.iter().any(|&v| v != 0) {
                let n = self.translation(c).iter().map(|v| v * v).sum::<f64>().sqrt();
                best = best.min(n);
            }
        });
        best
    }

    pub fn injectivity_radius(&self) -> f64 {
        0.5 * self.systole()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.basis.iter().map(|r| r.iter().map(|v| v * s).collect()).collect())
    }
}

/// Distance between `x` and `y` on the torus `t`.
pub fn torus_distance(t: &LatticeTorus, x: &[f64], y: &[f64]) -> f64 {
    t.distance(x, y)
}

/// Systole of the torus `t`.
pub fn torus_systole(t: &LatticeTorus) -> f64 {
    t.systole()
}
