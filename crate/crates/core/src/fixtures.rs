//! Reference problem instances with known answers.

use std::sync::Arc;

use crate::linalg::{SymmetricMatrix, Vector};
use crate::operators::{
    AffineOperator, CompositeOperator, ConstraintSet, Linear, OperatorSpec, PointSet, Quadratic,
    SmoothFunction,
};

/// Singular PSD matrix with `B·(1,1,−1) = 0` and spectrum `{0, roots of λ² − 330λ + 54}`.
pub fn example1_matrix() -> SymmetricMatrix {
    SymmetricMatrix::from_lower(&[
        vec![22.0, 46.0, 68.0],
        vec![46.0, 97.0, 143.0],
        vec![68.0, 143.0, 211.0],
    ])
    .expect("valid matrix")
}

/// `C = B·(1,2,3)`.
pub fn example1_rhs() -> Vector {
    Vector::from([318.0, 669.0, 987.0])
}

pub fn example1_affine() -> AffineOperator {
    AffineOperator::new(example1_matrix(), example1_rhs()).expect("dimensions agree")
}

pub fn example1_operator() -> OperatorSpec {
    OperatorSpec::AffineSymmetric(example1_affine())
}

/// `f(x) = ½⟨Bx,x⟩ − ⟨C,x⟩`, minimized on `(1,2,3) + span{(1,1,−1)}`.
pub fn example1_objective() -> Quadratic {
    Quadratic::from_affine(&example1_matrix(), &example1_rhs()).expect("valid quadratic")
}

/// Published values for the 3×3 instance.
pub mod example1 {
    pub const EPS: f64 = 1e-5;
    pub const LEAST_NORM: [f64; 3] = [1.0, 2.0, 3.0];
    /// `x_ε ≈ x̃ + 1e−5 · PERTURBATION`
    pub const PERTURBATION: [f64; 3] = [-0.2218, 0.167, -0.0557];
    pub const GAP: f64 = 2.7285e-12;
    pub const START: [f64; 3] = [5.0, 2.0, 3.0];
    pub const NESTEROV_ITERS: usize = 10_000;
    pub const NESTEROV_ITERATE: [f64; 3] = [2.3334, 3.3333, 1.6667];
    pub const NESTEROV_GAP: f64 = 9.9135e-10;
    /// Published Lipschitz bound of `B` (the trace).
    pub const LIPSCHITZ_BOUND: f64 = 330.0;
}

/// One-dimensional DC program `min g − h` with a known critical set.
#[derive(Debug, Clone)]
pub struct DcFixture {
    pub name: &'static str,
    pub g: OperatorSpec,
    pub h: Arc<dyn SmoothFunction>,
    pub x0: Vector,
    pub critical_set: PointSet,
    /// `inf f` over the feasible set.
    pub lower_bound: f64,
}

/// `g = ½x² + I_[−1,1]`, `h = 2x`: `f = ½x² − 2x` on `[−1,1]`, `S = {1}`.
pub fn dc_quadratic_linear() -> DcFixture {
    let set = ConstraintSet::cube(1, -1.0, 1.0).expect("valid box");
    let g = CompositeOperator::new(SymmetricMatrix::identity(1), Vector::zeros(1), set)
        .expect("valid composite");
    DcFixture {
        name: "quadratic-minus-linear",
        g: OperatorSpec::SubdifferentialComposite(g),
        h: Arc::new(Linear::new(Vector::from([2.0]))),
        x0: Vector::from([0.0]),
        critical_set: PointSet::new(vec![Vector::from([1.0])]),
        lower_bound: -1.5,
    }
}

/// `g = I_[−1,1]`, `h = ½x²`: `f = −½x²` on `[−1,1]`, `S = {−1, 0, 1}`.
pub fn dc_concave_box() -> DcFixture {
    let set = ConstraintSet::cube(1, -1.0, 1.0).expect("valid box");
    DcFixture {
        name: "concave-on-box",
        g: OperatorSpec::SubdifferentialComposite(
            CompositeOperator::indicator(set).expect("valid indicator"),
        ),
        h: Arc::new(
            Quadratic::new(SymmetricMatrix::identity(1), Vector::zeros(1)).expect("valid quadratic"),
        ),
        x0: Vector::from([0.1]),
        critical_set: PointSet::new(vec![
            Vector::from([-1.0]),
            Vector::from([0.0]),
            Vector::from([1.0]),
        ]),
        lower_bound: -0.5,
    }
}
