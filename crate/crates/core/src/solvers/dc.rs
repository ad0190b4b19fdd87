//! Forward-backward splitting and DCA for `min f = g − h` with `g` convex
//! (given by a monotone [`OperatorSpec`]) and `h` convex and smooth.

use std::sync::Arc;

use super::trace::{guard_iterate, IterateTrace, RunOptions, StopReason, TraceBuilder};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{Cholesky, Vector};
use crate::operators::{
    composite_linearized_min, composite_prox_residual, forward_step, resolvent, CompositeOperator,
    ConstraintSet, InnerSolveConfig, OperatorSpec, ScaledPlusHalfNorm, SmoothFunction,
};

fn dc_objective(g: &OperatorSpec, h: &dyn SmoothFunction, x: &Vector) -> f64 {
    g.potential(x) - h.value(x)
}

fn check_pair(g: &OperatorSpec, h: &dyn SmoothFunction, x0: &Vector) -> Result<()> {
    if matches!(g, OperatorSpec::DcPair { .. }) {
        return Err(Error::invalid("the convex part g cannot itself be a DC pair"));
    }
    check_dim(h.dim(), x0.len())?;
    g.check_input(x0)
}

/// Rejects NaN and `−∞`, and `+∞` after the first iterate (every later
/// iterate lies in the domain of `g`).
fn guard_objective(iteration: usize, value: f64, x: &Vector) -> Result<()> {
    if value.is_nan() || value == f64::NEG_INFINITY || (iteration > 0 && value.is_infinite()) {
        return Err(Error::Divergence {
            iteration,
            norm: x.norm(),
        });
    }
    Ok(())
}

/// `x_{k+1} = J_{γ∂g}(x_k + γ∇h(x_k))`.
///
/// Records `‖r_k‖` with `r_k = ∇h(x_k) − ∇h(x_{k+1}) − (x_{k+1} − x_k)/γ`,
/// the descent quantity `γ(f(x_{k+1}) − f(x_k)) + ‖x_{k+1} − x_k‖²` and, for
/// composite `g`, the stationarity residual of each resolvent subproblem.
/// Stops when `‖r_k‖ ≤ stop_tol`.
pub fn forward_backward_dc(
    g: &OperatorSpec,
    h: &dyn SmoothFunction,
    gamma: f64,
    x0: &Vector,
    opts: &RunOptions<'_>,
) -> Result<IterateTrace> {
    opts.validate()?;
    check_pair(g, h, x0)?;
    let gap = |v: f64| opts.optimal_value.map(|f| v - f);
    let mut trace = TraceBuilder::new(x0.len(), opts);
    let mut x = x0.clone();
    let mut fx = dc_objective(g, h, &x);
    guard_objective(0, fx, &x)?;
    trace.iterate(0, &x, fx, gap(fx));
    let mut grad_h = h.gradient(&x);
    let mut stop = StopReason::MaxIterations;
    for k in 0..opts.max_iters {
        let fwd = forward_step(h, gamma, &x)?;
        let next = resolvent(g, gamma, &fwd, &opts.inner).map_err(|e| e.at_iteration(k))?;
        guard_iterate(k + 1, &next)?;
        let f_next = dc_objective(g, h, &next);
        guard_objective(k + 1, f_next, &next)?;

        let grad_next = h.gradient(&next);
        let diff = &next - &x;
        let mut r = &grad_h - &grad_next;
        r.axpy(-1.0 / gamma, &diff);
        let step = diff.norm();

        trace.step(step);
        trace.residual(r.norm());
        trace.descent(gamma * (f_next - fx) + step * step);
        if let OperatorSpec::SubdifferentialComposite(op) = g {
            trace.subproblem_residual(composite_prox_residual(op, gamma, &fwd, &next));
        }
        trace.iterate(k + 1, &next, f_next, gap(f_next));

        x = next;
        fx = f_next;
        grad_h = grad_next;
        if opts.should_stop(r.norm()) {
            stop = StopReason::Converged;
            break;
        }
    }
    Ok(trace.finish("fb_dc", Some(gamma), stop))
}

/// DCA: `y_k = ∇h(x_k)`, `x_{k+1} ∈ argmin g − ⟨y_k, ·⟩`. Stops when
/// `‖x_{k+1} − x_k‖ ≤ stop_tol`.
///
/// An unbounded subproblem, or iterates leaving the divergence radius, abort
/// the run with a divergence error.
pub fn dca(g: &OperatorSpec, h: &dyn SmoothFunction, x0: &Vector, opts: &RunOptions<'_>) -> Result<IterateTrace> {
    opts.validate()?;
    check_pair(g, h, x0)?;
    let gap = |v: f64| opts.optimal_value.map(|f| v - f);
    let mut trace = TraceBuilder::new(x0.len(), opts);
    let mut x = x0.clone();
    let fx = dc_objective(g, h, &x);
    guard_objective(0, fx, &x)?;
    trace.iterate(0, &x, fx, gap(fx));
    let mut stop = StopReason::MaxIterations;
    for k in 0..opts.max_iters {
        let y = h.gradient(&x);
        let next = linearized_min(g, &y, &x, &opts.inner).map_err(|e| match e {
            Error::Divergence { norm, .. } => Error::Divergence { iteration: k + 1, norm },
            other => other.at_iteration(k),
        })?;
        guard_iterate(k + 1, &next)?;
        let f_next = dc_objective(g, h, &next);
        guard_objective(k + 1, f_next, &next)?;
        let step = next.distance(&x);
        trace.step(step);
        trace.iterate(k + 1, &next, f_next, gap(f_next));
        x = next;
        if opts.should_stop(step) {
            stop = StopReason::Converged;
            break;
        }
    }
    Ok(trace.finish("dca", None, stop))
}

/// `argmin_u g(u) − ⟨y, u⟩`
fn linearized_min(g: &OperatorSpec, y: &Vector, start: &Vector, inner: &InnerSolveConfig) -> Result<Vector> {
    let unbounded = || Error::Divergence {
        iteration: 0,
        norm: f64::INFINITY,
    };
    match g {
        OperatorSpec::SubdifferentialComposite(op) => composite_linearized_min(op, y, start, inner),
        OperatorSpec::AffineSymmetric(op) => {
            // g(u) = ½⟨Bu,u⟩ − ⟨C,u⟩ is convex only for B ⪰ 0.
            let as_composite = CompositeOperator::new(op.matrix().clone(), -op.rhs(), ConstraintSet::WholeSpace)?;
            composite_linearized_min(&as_composite, y, start, inner)
        }
        OperatorSpec::Sign => {
            let s = y[0];
            if s.abs() > 1.0 {
                Err(unbounded())
            } else if s.abs() < 1.0 {
                Ok(Vector::zeros(1))
            } else {
                // every u with sign(u) = s is optimal; stay as close to the start as possible
                Ok(Vector::from([if start[0] * s > 0.0 { start[0] } else { 0.0 }]))
            }
        }
        OperatorSpec::SmoothGradient(f) => match f.as_quadratic() {
            Some(q) => {
                let rhs = y - q.linear();
                Cholesky::factor(q.matrix())
                    .map(|c| c.solve(&rhs))
                    .or_else(|_| {
                        let as_composite =
                            CompositeOperator::new(q.matrix().clone(), q.linear().clone(), ConstraintSet::WholeSpace)?;
                        composite_linearized_min(&as_composite, y, start, inner)
                    })
            }
            None => Err(Error::Unsupported(
                "DCA subproblem for a non-quadratic smooth convex part".into(),
            )),
        },
        OperatorSpec::DcPair { .. } => Err(Error::invalid("the convex part g cannot itself be a DC pair")),
    }
}

/// The pair `(γg + ½‖·‖², γh + ½‖·‖²)` on which DCA reproduces the
/// forward-backward iterates of `(g, h)` with step `γ`.
pub fn fb_equivalent_pair(
    g: &OperatorSpec,
    h: Arc<dyn SmoothFunction>,
    gamma: f64,
) -> Result<(OperatorSpec, Arc<dyn SmoothFunction>)> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::invalid(format!("step size gamma must be positive, got {gamma}")));
    }
    let g_new = match g {
        OperatorSpec::SubdifferentialComposite(op) => {
            OperatorSpec::SubdifferentialComposite(op.scaled_plus_half_norm(gamma)?)
        }
        OperatorSpec::AffineSymmetric(op) => OperatorSpec::composite(
            op.matrix().shifted(1.0, gamma),
            op.rhs().scale(-gamma),
            ConstraintSet::WholeSpace,
        )?,
        _ => {
            return Err(Error::Unsupported(
                "equivalent DCA pair is available for affine and composite g".into(),
            ))
        }
    };
    Ok((g_new, Arc::new(ScaledPlusHalfNorm::new(h, gamma))))
}
