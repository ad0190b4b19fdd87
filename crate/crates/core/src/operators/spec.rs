use std::fmt;
use std::sync::Arc;

use super::{ConstraintSet, SmoothFunction};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{eigendecompose, SymmetricMatrix, Vector, DEFAULT_EIGEN_TOL};

/// Tolerance for `x ∈ K` when evaluating indicator terms.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Stopping rule for the inner solvers behind resolvents and subproblems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolveConfig {
    /// Projected-gradient residual target.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for InnerSolveConfig {
    fn default() -> Self {
        InnerSolveConfig {
            tol: 1e-10,
            max_iters: 100_000,
        }
    }
}

/// `A(x) = Bx − C` with `B` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineOperator {
    b: SymmetricMatrix,
    c: Vector,
}

impl AffineOperator {
    pub fn new(b: SymmetricMatrix, c: Vector) -> Result<Self> {
        check_dim(b.dim(), c.len())?;
        Ok(AffineOperator { b, c })
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.b
    }

    pub fn rhs(&self) -> &Vector {
        &self.c
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.b.mul_vec(x) - &self.c
    }

    /// `½⟨Bx, x⟩ − ⟨C, x⟩`, whose gradient is `A`.
    pub fn potential(&self, x: &Vector) -> f64 {
        0.5 * self.b.quadratic_form(x) - self.c.dot(x)
    }
}

/// `∂(g₁ + I_K)` with `g₁(x) = ½⟨Qx, x⟩ + ⟨q, x⟩` and `Q ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeOperator {
    q: SymmetricMatrix,
    lin: Vector,
    set: ConstraintSet,
    q_min: f64,
    q_max: f64,
}

impl CompositeOperator {
    pub fn new(q: SymmetricMatrix, lin: Vector, set: ConstraintSet) -> Result<Self> {
        let n = q.dim();
        check_dim(n, lin.len())?;
        set.check_dim(n)?;
        let eig = eigendecompose(&q, DEFAULT_EIGEN_TOL)?;
        let q_min = eig.eigenvalues[0];
        let q_max = eig.eigenvalues[n - 1];
        if q_min < -1e-9 * q_max.abs().max(1.0) {
            return Err(Error::invalid(format!(
                "quadratic term must be positive semidefinite (smallest eigenvalue {q_min:e})"
            )));
        }
        Ok(CompositeOperator {
            q,
            lin,
            set,
            q_min: q_min.max(0.0),
            q_max: q_max.max(0.0),
        })
    }

    /// Indicator of `K` alone (`Q = 0`, `q = 0`).
    pub fn indicator(set: ConstraintSet) -> Result<Self> {
        let n = set
            .dim()
            .ok_or_else(|| Error::invalid("indicator of the whole space needs an explicit dimension"))?;
        Self::new(SymmetricMatrix::zeros(n), Vector::zeros(n), set)
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn quad(&self) -> &SymmetricMatrix {
        &self.q
    }

    pub fn lin(&self) -> &Vector {
        &self.lin
    }

    pub fn set(&self) -> &ConstraintSet {
        &self.set
    }

    /// Extreme eigenvalues of `Q`, clipped at zero.
    pub fn curvature_bounds(&self) -> (f64, f64) {
        (self.q_min, self.q_max)
    }

    /// `g₁(x)`, ignoring the constraint.
    pub fn smooth_value(&self, x: &Vector) -> f64 {
        0.5 * self.q.quadratic_form(x) + self.lin.dot(x)
    }

    pub fn smooth_gradient(&self, x: &Vector) -> Vector {
        let mut g = self.q.mul_vec(x);
        g.axpy(1.0, &self.lin);
        g
    }

    /// `g₁(x) + I_K(x)`
    pub fn value(&self, x: &Vector) -> f64 {
        if self.set.contains(x, FEASIBILITY_TOL) {
            self.smooth_value(x)
        } else {
            f64::INFINITY
        }
    }

    /// `(γQ + I, γq, K)`: the data of `γ g + ½‖·‖²`.
    pub fn scaled_plus_half_norm(&self, gamma: f64) -> Result<Self> {
        CompositeOperator::new(
            self.q.shifted(1.0, gamma),
            self.lin.scale(gamma),
            self.set.clone(),
        )
    }
}

/// Structured description of a set-valued operator.
#[derive(Clone)]
pub enum OperatorSpec {
    AffineSymmetric(AffineOperator),
    SubdifferentialComposite(CompositeOperator),
    /// Scalar `Sign` mapping, `∂|·|` on the real line.
    Sign,
    SmoothGradient(Arc<dyn SmoothFunction>),
    /// DC pair `(g, h)` representing `∂g − ∇h`.
    DcPair {
        g: Box<OperatorSpec>,
        h: Arc<dyn SmoothFunction>,
    },
}

impl fmt::Debug for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSpec::AffineSymmetric(a) => f.debug_tuple("AffineSymmetric").field(a).finish(),
            OperatorSpec::SubdifferentialComposite(c) => {
                f.debug_tuple("SubdifferentialComposite").field(c).finish()
            }
            OperatorSpec::Sign => f.write_str("Sign"),
            OperatorSpec::SmoothGradient(s) => f.debug_tuple("SmoothGradient").field(s).finish(),
            OperatorSpec::DcPair { g, h } => {
                f.debug_struct("DcPair").field("g", g).field("h", h).finish()
            }
        }
    }
}

impl OperatorSpec {
    pub fn affine(b: SymmetricMatrix, c: Vector) -> Result<Self> {
        Ok(OperatorSpec::AffineSymmetric(AffineOperator::new(b, c)?))
    }

    pub fn composite(q: SymmetricMatrix, lin: Vector, set: ConstraintSet) -> Result<Self> {
        Ok(OperatorSpec::SubdifferentialComposite(CompositeOperator::new(
            q, lin, set,
        )?))
    }

    pub fn dc_pair(g: OperatorSpec, h: Arc<dyn SmoothFunction>) -> Result<Self> {
        if matches!(g, OperatorSpec::DcPair { .. }) {
            return Err(Error::invalid("the convex part of a DC pair cannot itself be a DC pair"));
        }
        if let Some(n) = g.dim() {
            check_dim(n, h.dim())?;
        }
        Ok(OperatorSpec::DcPair {
            g: Box::new(g),
            h,
        })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            OperatorSpec::AffineSymmetric(a) => Some(a.matrix().dim()),
            OperatorSpec::SubdifferentialComposite(c) => Some(c.dim()),
            OperatorSpec::Sign => Some(1),
            OperatorSpec::SmoothGradient(f) => Some(f.dim()),
            OperatorSpec::DcPair { h, .. } => Some(h.dim()),
        }
    }

    /// Function whose (sub)differential is the operator: `½⟨Bx,x⟩ − ⟨C,x⟩`,
    /// `g₁ + I_K`, `|x|`, `f`, or `g − h`.
    pub fn potential(&self, x: &Vector) -> f64 {
        match self {
            OperatorSpec::AffineSymmetric(a) => a.potential(x),
            OperatorSpec::SubdifferentialComposite(c) => c.value(x),
            OperatorSpec::Sign => x[0].abs(),
            OperatorSpec::SmoothGradient(f) => f.value(x),
            OperatorSpec::DcPair { g, h } => g.potential(x) - h.value(x),
        }
    }

    pub(crate) fn check_input(&self, x: &Vector) -> Result<()> {
        match self.dim() {
            Some(n) => check_dim(n, x.len()),
            None => Ok(()),
        }
    }
}
