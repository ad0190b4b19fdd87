use crate::error::{Error, Result};
use crate::linalg::{default_zero_threshold, min_norm_solve, solve_shifted, Vector};
use crate::operators::{resolvent, InnerSolveConfig, OperatorSpec};

/// Regularization level used when the least-norm zero has no closed form.
pub const EPS_FLOOR: f64 = 1e-10;

/// The unique `x_ε` with `0 ∈ (A + εI)(x_ε)`.
///
/// Affine operators are solved as `(B + εI)x = C`; every other monotone
/// variant uses `x_ε = J_{A/ε}(0)`.
pub fn tikhonov_solve(a: &OperatorSpec, eps: f64, inner: &InnerSolveConfig) -> Result<Vector> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    match a {
        OperatorSpec::AffineSymmetric(op) => solve_shifted(op.matrix(), eps, 1.0, op.rhs()),
        OperatorSpec::DcPair { .. } => Err(Error::Unsupported(
            "Tikhonov regularization of a DC pair (the difference is not monotone)".into(),
        )),
        _ => {
            let n = a.dim().expect("monotone variants have a dimension");
            resolvent(a, 1.0 / eps, &Vector::zeros(n), inner)
        }
    }
}

/// Least-norm element of `S = A⁻¹(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastNormSolution {
    pub x: Vector,
    /// Set when `x` is `x_ε` at [`EPS_FLOOR`] rather than an exact value.
    pub approximate: bool,
}

pub fn least_norm_solution(a: &OperatorSpec, inner: &InnerSolveConfig) -> Result<LeastNormSolution> {
    match a {
        OperatorSpec::AffineSymmetric(op) => Ok(LeastNormSolution {
            x: min_norm_solve(op.matrix(), op.rhs(), default_zero_threshold(op.matrix()))?,
            approximate: false,
        }),
        // Sign vanishes only at 0.
        OperatorSpec::Sign => Ok(LeastNormSolution {
            x: Vector::zeros(1),
            approximate: false,
        }),
        _ => Ok(LeastNormSolution {
            x: tikhonov_solve(a, EPS_FLOOR, inner).map_err(|e| e.at_eps(EPS_FLOOR))?,
            approximate: true,
        }),
    }
}
