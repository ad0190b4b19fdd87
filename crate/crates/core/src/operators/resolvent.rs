use super::{CompositeOperator, ConstraintSet, InnerSolveConfig, OperatorSpec, SmoothFunction};
use crate::error::{Error, Result};
use crate::linalg::{default_zero_threshold, min_norm_solve, solve_shifted, SymmetricMatrix, Vector};

/// `J_{γA}(x) = (Id + γA)⁻¹(x)`: the unique `y` with `x ∈ y + γA(y)`.
pub fn resolvent(a: &OperatorSpec, gamma: f64, x: &Vector, inner: &InnerSolveConfig) -> Result<Vector> {
    check_gamma(gamma)?;
    a.check_input(x)?;
    match a {
        OperatorSpec::AffineSymmetric(op) => {
            // (I + γB) y = x + γC
            let mut rhs = x.clone();
            rhs.axpy(gamma, op.rhs());
            solve_shifted(op.matrix(), 1.0, gamma, &rhs)
        }
        OperatorSpec::SubdifferentialComposite(op) => composite_prox(op, gamma, x, inner),
        OperatorSpec::Sign => {
            let v = x[0];
            Ok(Vector::from([v - gamma * (v / gamma).clamp(-1.0, 1.0)]))
        }
        OperatorSpec::SmoothGradient(f) => smooth_prox(f.as_ref(), gamma, x, inner),
        OperatorSpec::DcPair { .. } => Err(Error::Unsupported(
            "resolvent of a DC pair (the difference is not monotone)".into(),
        )),
    }
}

/// `L_{−γ∇h}(x) = x + γ∇h(x)`
pub fn forward_step(h: &dyn SmoothFunction, gamma: f64, x: &Vector) -> Result<Vector> {
    check_gamma(gamma)?;
    let mut out = x.clone();
    out.axpy(gamma, &h.gradient(x));
    Ok(out)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("step size gamma must be positive, got {gamma}")))
    }
}

/// `argmin_{u ∈ K} g₁(u) + (1/2γ)‖u − x‖²`
pub(crate) fn composite_prox(
    op: &CompositeOperator,
    gamma: f64,
    x: &Vector,
    inner: &InnerSolveConfig,
) -> Result<Vector> {
    let mut lin = op.lin().clone();
    lin.axpy(-1.0 / gamma, x);
    QuadraticOverSet::new(op, 1.0 / gamma, lin).minimize(x, inner)
}

/// Projected-gradient residual of the prox subproblem at `u`; zero iff `u`
/// is the exact resolvent value.
pub fn composite_prox_residual(op: &CompositeOperator, gamma: f64, x: &Vector, u: &Vector) -> f64 {
    let mut lin = op.lin().clone();
    lin.axpy(-1.0 / gamma, x);
    QuadraticOverSet::new(op, 1.0 / gamma, lin).residual(u)
}

/// `argmin_{u ∈ K} g₁(u) − ⟨y, u⟩`, the DCA subproblem.
pub(crate) fn composite_linearized_min(
    op: &CompositeOperator,
    y: &Vector,
    start: &Vector,
    inner: &InnerSolveConfig,
) -> Result<Vector> {
    let lin = op.lin() - y;
    QuadraticOverSet::new(op, 0.0, lin).minimize(start, inner)
}

/// `min_{u ∈ K} ½⟨(Q + sI)u, u⟩ + ⟨b, u⟩`
struct QuadraticOverSet<'a> {
    q: &'a SymmetricMatrix,
    shift: f64,
    lin: Vector,
    set: &'a ConstraintSet,
    lmin: f64,
    lmax: f64,
}

impl<'a> QuadraticOverSet<'a> {
    fn new(op: &'a CompositeOperator, shift: f64, lin: Vector) -> Self {
        let (lmin, lmax) = op.curvature_bounds();
        QuadraticOverSet {
            q: op.quad(),
            shift,
            lin,
            set: op.set(),
            lmin,
            lmax,
        }
    }

    fn gradient(&self, u: &Vector) -> Vector {
        let mut g = self.q.mul_vec(u);
        g.axpy(self.shift, u);
        g.axpy(1.0, &self.lin);
        g
    }

    fn step_constant(&self) -> f64 {
        (self.lmax + self.shift).max(1.0)
    }

    fn residual(&self, u: &Vector) -> f64 {
        let l = self.step_constant();
        let mut trial = u.clone();
        trial.axpy(-1.0 / l, &self.gradient(u));
        self.set.project(&trial).distance(u) * l
    }

    fn minimize(&self, start: &Vector, inner: &InnerSolveConfig) -> Result<Vector> {
        if let Some(u) = self.closed_form(start)? {
            return Ok(u);
        }
        self.accelerated_projected_gradient(start, inner)
    }

    fn closed_form(&self, start: &Vector) -> Result<Option<Vector>> {
        let unbounded = || Error::Divergence {
            iteration: 0,
            norm: f64::INFINITY,
        };
        match self.set {
            ConstraintSet::WholeSpace => {
                let neg = -&self.lin;
                match solve_shifted(self.q, self.shift, 1.0, &neg) {
                    Ok(u) => Ok(Some(u)),
                    Err(Error::NotPositiveDefinite) => {
                        let m = self.q.shifted(self.shift, 1.0);
                        min_norm_solve(&m, &neg, default_zero_threshold(&m))
                            .map(Some)
                            .map_err(|_| unbounded())
                    }
                    Err(e) => Err(e),
                }
            }
            ConstraintSet::Box { lower, upper } if self.q.is_diagonal() => {
                let diag = self.q.diagonal_entries();
                let mut u = Vector::zeros(diag.len());
                for i in 0..diag.len() {
                    let a = diag[i] + self.shift;
                    let b = self.lin[i];
                    u[i] = if a > 0.0 {
                        (-b / a).clamp(lower[i], upper[i])
                    } else if b > 0.0 {
                        lower[i]
                    } else if b < 0.0 {
                        upper[i]
                    } else {
                        start[i].clamp(lower[i], upper[i])
                    };
                    if !u[i].is_finite() {
                        return Err(unbounded());
                    }
                }
                Ok(Some(u))
            }
            ConstraintSet::Ball { center, radius } if self.q.max_abs() == 0.0 => {
                if self.shift > 0.0 {
                    Ok(Some(self.set.project(&self.lin.scale(-1.0 / self.shift))))
                } else {
                    let norm = self.lin.norm();
                    if norm == 0.0 {
                        Ok(Some(self.set.project(start)))
                    } else {
                        let mut u = center.clone();
                        u.axpy(-radius / norm, &self.lin);
                        Ok(Some(u))
                    }
                }
            }
            _ => Ok(None),
        }
    }

    fn accelerated_projected_gradient(&self, start: &Vector, inner: &InnerSolveConfig) -> Result<Vector> {
        let l = self.step_constant();
        let mu = self.lmin + self.shift;
        let strongly_convex = mu > 1e-12 * l;
        let beta_const = if strongly_convex {
            (l.sqrt() - mu.sqrt()) / (l.sqrt() + mu.sqrt())
        } else {
            0.0
        };

        let mut u = self.set.project(start);
        let mut v = u.clone();
        let mut t = 1.0_f64;
        let mut last = f64::INFINITY;
        for _ in 0..inner.max_iters {
            let mut trial = v.clone();
            trial.axpy(-1.0 / l, &self.gradient(&v));
            let u_next = self.set.project(&trial);
            last = u_next.distance(&v) * l;
            if last <= inner.tol {
                return Ok(u_next);
            }
            let beta = if strongly_convex {
                beta_const
            } else {
                let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
                let b = (t - 1.0) / t_next;
                t = t_next;
                b
            };
            v = u_next.clone();
            v.axpy(beta, &(&u_next - &u));
            u = u_next;
        }
        Err(Error::NoConvergence {
            what: "accelerated projected gradient",
            iterations: inner.max_iters,
            residual: last,
        })
    }
}

/// `argmin_u f(u) + (1/2γ)‖u − x‖²` for convex smooth `f`.
fn smooth_prox(f: &dyn SmoothFunction, gamma: f64, x: &Vector, inner: &InnerSolveConfig) -> Result<Vector> {
    if let Some(q) = f.as_quadratic() {
        // (I + γM) u = x − γb
        let mut rhs = x.clone();
        rhs.axpy(-gamma, q.linear());
        return solve_shifted(q.matrix(), 1.0, gamma, &rhs);
    }
    let mu = 1.0 / gamma;
    let l = f.lipschitz() + mu;
    let beta = (l.sqrt() - mu.sqrt()) / (l.sqrt() + mu.sqrt());
    let grad = |u: &Vector| {
        let mut g = f.gradient(u);
        g.axpy(mu, &(u - x));
        g
    };
    let mut u = x.clone();
    let mut v = x.clone();
    let mut last = f64::INFINITY;
    for _ in 0..inner.max_iters {
        let gv = grad(&v);
        last = gv.norm();
        if last <= inner.tol {
            return Ok(v);
        }
        let mut u_next = v.clone();
        u_next.axpy(-1.0 / l, &gv);
        v = u_next.clone();
        v.axpy(beta, &(&u_next - &u));
        u = u_next;
    }
    Err(Error::NoConvergence {
        what: "smooth resolvent",
        iterations: inner.max_iters,
        residual: last,
    })
}
