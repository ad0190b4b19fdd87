use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Result};
use crate::linalg::{operator_norm, SymmetricMatrix, Vector};

/// Differentiable function with Lipschitz gradient.
///
/// Implementations must be deterministic and reentrant.
pub trait SmoothFunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn value(&self, x: &Vector) -> f64;

    fn gradient(&self, x: &Vector) -> Vector;

    /// Lipschitz constant of the gradient.
    fn lipschitz(&self) -> f64;

    /// `f(x) − f(reference)`. Implementations may override this with a
    /// cancellation-free formula.
    fn gap(&self, x: &Vector, reference: &Vector) -> f64 {
        self.value(x) - self.value(reference)
    }

    fn as_quadratic(&self) -> Option<&Quadratic> {
        None
    }
}

/// `f(x) = ½⟨Mx, x⟩ + ⟨b, x⟩`
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    matrix: SymmetricMatrix,
    linear: Vector,
    lipschitz: f64,
}

impl Quadratic {
    pub fn new(matrix: SymmetricMatrix, linear: Vector) -> Result<Self> {
        check_dim(matrix.dim(), linear.len())?;
        let lipschitz = operator_norm(&matrix)?;
        Ok(Quadratic {
            matrix,
            linear,
            lipschitz,
        })
    }

    /// The potential `½⟨Bx,x⟩ − ⟨C,x⟩` of the affine map `x ↦ Bx − C`.
    pub fn from_affine(b: &SymmetricMatrix, c: &Vector) -> Result<Self> {
        Self::new(b.clone(), -c)
    }

    /// Overrides the gradient Lipschitz constant, e.g. with a published upper
    /// bound instead of the exact spectral norm.
    pub fn with_lipschitz(mut self, lipschitz: f64) -> Self {
        self.lipschitz = lipschitz;
        self
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    pub fn linear(&self) -> &Vector {
        &self.linear
    }
}

impl SmoothFunction for Quadratic {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        0.5 * self.matrix.quadratic_form(x) + self.linear.dot(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        let mut g = self.matrix.mul_vec(x);
        g.axpy(1.0, &self.linear);
        g
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `⟨∇f(ref), d⟩ + ½⟨Md, d⟩` with `d = x − ref`; exact for quadratics and
    /// free of the cancellation in `f(x) − f(ref)`.
    fn gap(&self, x: &Vector, reference: &Vector) -> f64 {
        let d = x - reference;
        self.gradient(reference).dot(&d) + 0.5 * self.matrix.quadratic_form(&d)
    }

    fn as_quadratic(&self) -> Option<&Quadratic> {
        Some(self)
    }
}

/// `f(x) = ⟨b, x⟩`
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    coeffs: Vector,
}

impl Linear {
    pub fn new(coeffs: Vector) -> Self {
        Linear { coeffs }
    }
}

impl SmoothFunction for Linear {
    fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn value(&self, x: &Vector) -> f64 {
        self.coeffs.dot(x)
    }

    fn gradient(&self, _x: &Vector) -> Vector {
        self.coeffs.clone()
    }

    fn lipschitz(&self) -> f64 {
        0.0
    }

    fn gap(&self, x: &Vector, reference: &Vector) -> f64 {
        self.coeffs.dot(&(x - reference))
    }
}

/// Tikhonov-regularized function `f + (ε/2)‖·‖²`.
#[derive(Debug, Clone)]
pub struct Regularized {
    base: Arc<dyn SmoothFunction>,
    eps: f64,
}

impl Regularized {
    pub fn new(base: Arc<dyn SmoothFunction>, eps: f64) -> Self {
        Regularized { base, eps }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl SmoothFunction for Regularized {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        self.base.value(x) + 0.5 * self.eps * x.dot(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        let mut g = self.base.gradient(x);
        g.axpy(self.eps, x);
        g
    }

    fn lipschitz(&self) -> f64 {
        self.base.lipschitz() + self.eps
    }

    fn gap(&self, x: &Vector, reference: &Vector) -> f64 {
        let d = x - reference;
        self.base.gap(x, reference) + self.eps * (reference.dot(&d) + 0.5 * d.dot(&d))
    }
}

/// `scale · f + ½‖·‖²`
#[derive(Debug, Clone)]
pub struct ScaledPlusHalfNorm {
    base: Arc<dyn SmoothFunction>,
    scale: f64,
}

impl ScaledPlusHalfNorm {
    pub fn new(base: Arc<dyn SmoothFunction>, scale: f64) -> Self {
        ScaledPlusHalfNorm { base, scale }
    }
}

impl SmoothFunction for ScaledPlusHalfNorm {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        self.scale * self.base.value(x) + 0.5 * x.dot(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        let mut g = self.base.gradient(x).scale(self.scale);
        g.axpy(1.0, x);
        g
    }

    fn lipschitz(&self) -> f64 {
        self.scale.abs() * self.base.lipschitz() + 1.0
    }
}

/// Smooth function given by a callback returning `(value, gradient)`.
pub struct CallbackFunction<F> {
    dim: usize,
    lipschitz: f64,
    eval: F,
}

impl<F> CallbackFunction<F>
where
    F: Fn(&Vector) -> (f64, Vector) + Send + Sync,
{
    pub fn new(dim: usize, lipschitz: f64, eval: F) -> Self {
        CallbackFunction {
            dim,
            lipschitz,
            eval,
        }
    }
}

impl<F> fmt::Debug for CallbackFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CallbackFunction")
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl<F> SmoothFunction for CallbackFunction<F>
where
    F: Fn(&Vector) -> (f64, Vector) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Vector) -> f64 {
        (self.eval)(x).0
    }

    fn gradient(&self, x: &Vector) -> Vector {
        (self.eval)(x).1
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1_matrix, example1_rhs};

    #[test]
    fn quadratic_gap_matches_naive_difference_when_well_scaled() {
        let q = Quadratic::new(
            SymmetricMatrix::from_lower(&[vec![2.0], vec![0.5, 1.0]]).unwrap(),
            Vector::from([1.0, -1.0]),
        )
        .unwrap();
        let x = Vector::from([0.3, 0.7]);
        let r = Vector::from([-1.0, 2.0]);
        assert!((q.gap(&x, &r) - (q.value(&x) - q.value(&r))).abs() < 1e-14);
    }

    #[test]
    fn quadratic_gap_is_cancellation_free() {
        let f = Quadratic::from_affine(&example1_matrix(), &example1_rhs()).unwrap();
        let x_tilde = Vector::from([1.0, 2.0, 3.0]);
        let mut x = x_tilde.clone();
        x.axpy(1e-7, &Vector::from([1.0, 0.0, 0.0]));
        // ½·22·d² since ∇f(x̃) = 0
        let d = x[0] - 1.0;
        assert!((f.gap(&x, &x_tilde) / (11.0 * d * d) - 1.0).abs() < 1e-12);
        assert!((f.value(&x) - f.value(&x_tilde) - 11.0 * d * d).abs() > 1e-14);
    }

    #[test]
    fn regularized_and_scaled_wrappers() {
        let base: Arc<dyn SmoothFunction> = Arc::new(
            Quadratic::new(SymmetricMatrix::identity(2), Vector::zeros(2)).unwrap(),
        );
        let g = Regularized::new(base.clone(), 0.5);
        let x = Vector::from([1.0, 2.0]);
        assert_eq!(g.gradient(&x), Vector::from([1.5, 3.0]));
        assert_eq!(g.lipschitz(), 1.5);
        assert!((g.gap(&x, &Vector::zeros(2)) - 0.75 * 5.0).abs() < 1e-14);

        let h = ScaledPlusHalfNorm::new(base, 2.0);
        assert_eq!(h.gradient(&x), Vector::from([3.0, 6.0]));
        assert_eq!(h.lipschitz(), 3.0);
    }

    #[test]
    fn callback_function_evaluates() {
        let f = CallbackFunction::new(1, 0.0, |x: &Vector| (2.0 * x[0], Vector::from([2.0])));
        assert_eq!(f.value(&Vector::from([3.0])), 6.0);
        assert_eq!(f.gradient(&Vector::from([3.0])), Vector::from([2.0]));
    }
}
