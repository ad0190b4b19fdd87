//! Dense symmetric linear algebra.

mod eigen;
mod matrix;
mod solve;
mod spectral;
mod vector;

pub use eigen::{eigendecompose, EigenDecomposition, DEFAULT_EIGEN_TOL, MAX_SWEEPS};
pub use matrix::SymmetricMatrix;
pub use solve::{solve_shifted, Cholesky};
pub use spectral::{
    default_zero_threshold, distance_to_affine_solution_set, least_positive_eigenvalue,
    min_norm_solve, operator_norm, project_kernel, project_range, AffineSolutionSet,
    CONSISTENCY_TOL, ZERO_THRESHOLD_REL,
};
pub use vector::Vector;

pub(crate) use spectral::{least_positive_of, min_norm_solve_with, spectral_radius};
