use super::trace::{guard_iterate, IterateTrace, RunOptions, StopReason, TraceBuilder};
use crate::error::Result;
use crate::linalg::Vector;
use crate::operators::{resolvent, OperatorSpec};

/// `x_{k+1} = J_{γA}(x_k)`, stopping once `‖x_{k+1} − x_k‖ ≤ stop_tol`.
///
/// Objective values are the potential of `A` (`+∞` outside a constraint set).
pub fn proximal_point(a: &OperatorSpec, gamma: f64, x0: &Vector, opts: &RunOptions<'_>) -> Result<IterateTrace> {
    opts.validate()?;
    a.check_input(x0)?;
    let gap = |x: &Vector| match (&opts.reference, opts.optimal_value) {
        (Some(r), _) => Some(a.potential(x) - a.potential(r)),
        (None, Some(f)) => Some(a.potential(x) - f),
        _ => None,
    };
    let mut trace = TraceBuilder::new(x0.len(), opts);
    let mut x = x0.clone();
    trace.iterate(0, &x, a.potential(&x), gap(&x));
    let mut stop = StopReason::MaxIterations;
    for k in 0..opts.max_iters {
        let next = resolvent(a, gamma, &x, &opts.inner).map_err(|e| e.at_iteration(k))?;
        guard_iterate(k + 1, &next)?;
        let step = next.distance(&x);
        x = next;
        trace.step(step);
        trace.iterate(k + 1, &x, a.potential(&x), gap(&x));
        if opts.should_stop(step) {
            stop = StopReason::Converged;
            break;
        }
    }
    Ok(trace.finish("ppa", Some(gamma), stop))
}
