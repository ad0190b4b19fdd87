//! Spectral bounds and kernel/range geometry of symmetric matrices.

use super::{eigendecompose, EigenDecomposition, SymmetricMatrix, Vector, DEFAULT_EIGEN_TOL};
use crate::error::{check_dim, Error, Result};

/// Relative factor for the default zero threshold, `1e-9 · ‖M‖_∞`.
pub const ZERO_THRESHOLD_REL: f64 = 1e-9;

/// Relative residual allowed by [`min_norm_solve`]'s consistency check.
pub const CONSISTENCY_TOL: f64 = 1e-8;

pub fn default_zero_threshold(m: &SymmetricMatrix) -> f64 {
    ZERO_THRESHOLD_REL * m.norm_inf()
}

/// Smallest eigenvalue strictly above `zero_threshold`.
pub fn least_positive_eigenvalue(m: &SymmetricMatrix, zero_threshold: f64) -> Result<f64> {
    if !(zero_threshold >= 0.0) {
        return Err(Error::invalid("zero threshold must be non-negative"));
    }
    let eig = eigendecompose(m, DEFAULT_EIGEN_TOL)?;
    least_positive_of(&eig, zero_threshold)
}

pub(crate) fn least_positive_of(eig: &EigenDecomposition, zero_threshold: f64) -> Result<f64> {
    eig.eigenvalues
        .iter()
        .copied()
        .find(|&l| l > zero_threshold)
        .ok_or(Error::NoPositiveSpectrum {
            threshold: zero_threshold,
        })
}

/// Spectral norm `max_i |λ_i|`.
pub fn operator_norm(m: &SymmetricMatrix) -> Result<f64> {
    let eig = eigendecompose(m, DEFAULT_EIGEN_TOL)?;
    Ok(spectral_radius(&eig))
}

pub(crate) fn spectral_radius(eig: &EigenDecomposition) -> f64 {
    eig.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
}

/// Minimum-norm solution of `M x = c`, i.e. the unique solution lying in
/// `rge(M)`.
///
/// Eigenvalues with `|λ| <= zero_threshold` are treated as exact zeros. The
/// result is checked against `‖Mx − c‖ <= 1e-8 (1 + ‖c‖)`.
pub fn min_norm_solve(m: &SymmetricMatrix, c: &Vector, zero_threshold: f64) -> Result<Vector> {
    check_dim(m.dim(), c.len())?;
    let eig = eigendecompose(m, DEFAULT_EIGEN_TOL)?;
    min_norm_solve_with(m, &eig, c, zero_threshold)
}

pub(crate) fn min_norm_solve_with(
    m: &SymmetricMatrix,
    eig: &EigenDecomposition,
    c: &Vector,
    zero_threshold: f64,
) -> Result<Vector> {
    let x = eig.apply_spectral(c, |l| {
        if l.abs() > zero_threshold {
            1.0 / l
        } else {
            0.0
        }
    });
    let residual = m.mul_vec(&x).distance(c);
    if residual > CONSISTENCY_TOL * (1.0 + c.norm()) {
        return Err(Error::InconsistentSystem { residual });
    }
    Ok(x)
}

/// Orthogonal projection onto `ker(M)` (eigenvectors with `|λ| <= zero_threshold`).
pub fn project_kernel(m: &SymmetricMatrix, v: &Vector, zero_threshold: f64) -> Result<Vector> {
    check_dim(m.dim(), v.len())?;
    let eig = eigendecompose(m, DEFAULT_EIGEN_TOL)?;
    Ok(kernel_part(&eig, v, zero_threshold))
}

/// `v − project_kernel(M, v)`
pub fn project_range(m: &SymmetricMatrix, v: &Vector, zero_threshold: f64) -> Result<Vector> {
    let k = project_kernel(m, v, zero_threshold)?;
    Ok(v - &k)
}

fn kernel_part(eig: &EigenDecomposition, v: &Vector, zero_threshold: f64) -> Vector {
    let mut out = Vector::zeros(v.len());
    for basis in eig.kernel_basis(zero_threshold) {
        out.axpy(basis.dot(v), basis);
    }
    out
}

/// Euclidean distance from `x` to `{y : M y = c}`, using the default zero
/// threshold.
pub fn distance_to_affine_solution_set(m: &SymmetricMatrix, c: &Vector, x: &Vector) -> Result<f64> {
    Ok(AffineSolutionSet::new(m, c)?.distance(x))
}

/// The affine set `x_r + ker(M)` of solutions of `M y = c`, with its spectral
/// data cached so repeated distance queries are cheap.
#[derive(Debug, Clone)]
pub struct AffineSolutionSet {
    least_norm: Vector,
    kernel: Vec<Vector>,
}

impl AffineSolutionSet {
    pub fn new(m: &SymmetricMatrix, c: &Vector) -> Result<Self> {
        Self::with_threshold(m, c, default_zero_threshold(m))
    }

    pub fn with_threshold(m: &SymmetricMatrix, c: &Vector, zero_threshold: f64) -> Result<Self> {
        check_dim(m.dim(), c.len())?;
        let eig = eigendecompose(m, DEFAULT_EIGEN_TOL)?;
        let least_norm = min_norm_solve_with(m, &eig, c, zero_threshold)?;
        let kernel = eig
            .kernel_basis(zero_threshold)
            .into_iter()
            .cloned()
            .collect();
        Ok(AffineSolutionSet { least_norm, kernel })
    }

    /// The least-norm element `x_r`.
    pub fn least_norm(&self) -> &Vector {
        &self.least_norm
    }

    /// Orthonormal basis of the kernel.
    pub fn kernel(&self) -> &[Vector] {
        &self.kernel
    }

    /// Nearest point of the set to `x`: `x_r + P_ker(x − x_r)`.
    pub fn project(&self, x: &Vector) -> Vector {
        let diff = x - &self.least_norm;
        let mut out = self.least_norm.clone();
        for k in &self.kernel {
            out.axpy(k.dot(&diff), k);
        }
        out
    }

    /// `‖P_rge(x − x_r)‖`
    pub fn distance(&self, x: &Vector) -> f64 {
        let mut diff = x - &self.least_norm;
        for k in &self.kernel {
            let w = k.dot(&diff);
            diff.axpy(-w, k);
        }
        diff.norm()
    }
}
