use serde::{Deserialize, Serialize};

use super::Vector;
use crate::error::{check_dim, Error, Result};

/// Dense real symmetric matrix, stored row-major.
///
/// Symmetry is enforced at construction by mirroring the lower triangle, so
/// `get(i, j) == get(j, i)` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds from rows, keeping the lower triangle and mirroring it.
    ///
    /// Row `i` may be given in full (length `n`) or as its lower-triangular
    /// part (length `i + 1`).
    pub fn from_lower(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n && row.len() != i + 1 {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rows[i][j];
                if !v.is_finite() {
                    return Err(Error::invalid("matrix entries must be finite"));
                }
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(SymmetricMatrix { n, data })
    }

    /// Builds from full rows, rejecting input whose largest asymmetry exceeds
    /// `rel_tol` times the largest entry magnitude.
    pub fn from_rows_checked(rows: &[Vec<f64>], rel_tol: f64) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            check_dim(n, row.len())?;
        }
        let scale = rows
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((rows[i][j] - rows[j][i]).abs());
            }
        }
        if worst > rel_tol * scale {
            return Err(Error::invalid(format!(
                "matrix is not symmetric (max asymmetry {worst:e}, allowed {:e})",
                rel_tol * scale
            )));
        }
        Self::from_lower(rows)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m
    }

    /// `Σ w_i v_i v_iᵀ`; the result is symmetrized by construction.
    pub fn from_spectrum(weights: &[f64], vectors: &[Vector]) -> Result<Self> {
        check_dim(weights.len(), vectors.len())?;
        let n = vectors
            .first()
            .map(Vector::len)
            .ok_or_else(|| Error::invalid("empty spectrum"))?;
        let mut rows = vec![vec![0.0; n]; n];
        for (w, v) in weights.iter().zip(vectors) {
            check_dim(n, v.len())?;
            for i in 0..n {
                for j in 0..=i {
                    rows[i][j] += w * v[i] * v[j];
                }
            }
        }
        Self::from_lower(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &Vector) -> Vector {
        debug_assert_eq!(self.n, x.len());
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect::<Vec<f64>>()
            .into()
    }

    /// `⟨Mx, x⟩`
    pub fn quadratic_form(&self, x: &Vector) -> f64 {
        self.mul_vec(x).dot(x)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `M²`, which is symmetric when `M` is.
    pub fn square(&self) -> SymmetricMatrix {
        let n = self.n;
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                rows[i][j] = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
            }
        }
        Self::from_lower(&rows).expect("square of a valid matrix")
    }

    /// `alpha·I + beta·M`
    pub fn shifted(&self, alpha: f64, beta: f64) -> SymmetricMatrix {
        let n = self.n;
        let mut out = self.clone();
        for (k, v) in out.data.iter_mut().enumerate() {
            *v *= beta;
            if k / n == k % n {
                *v += alpha;
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0.0))
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for SymmetricMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows_checked(&rows, 1e-12)
    }
}

impl From<SymmetricMatrix> for Vec<Vec<f64>> {
    fn from(m: SymmetricMatrix) -> Self {
        m.to_rows()
    }
}
