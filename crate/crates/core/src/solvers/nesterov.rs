use super::trace::{guard_iterate, IterateTrace, RunOptions, StopReason, TraceBuilder};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Vector;
use crate::operators::SmoothFunction;

/// `2L‖x_0 − x*‖² / (k + 2)²`, the convex accelerated-gradient envelope.
pub fn agd_envelope(lipschitz: f64, initial_dist_sq: f64, k: usize) -> f64 {
    let k2 = (k as f64 + 2.0).powi(2);
    2.0 * lipschitz * initial_dist_sq / k2
}

/// `((L + 2ε)/2)‖y_0 − x_ε‖² e^{−k√(ε/(L+ε))}`, the strongly convex envelope
/// for `g = f + (ε/2)‖·‖²` with `∇f` `L`-Lipschitz.
pub fn strongly_convex_envelope(lipschitz: f64, eps: f64, initial_dist_sq: f64, k: usize) -> f64 {
    let rate = (eps / (lipschitz + eps)).sqrt();
    0.5 * (lipschitz + 2.0 * eps) * initial_dist_sq * (-(k as f64) * rate).exp()
}

fn check_lipschitz(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("Lipschitz constant must be positive, got {l}")))
    }
}

fn gap_fn<'a>(f: &'a dyn SmoothFunction, opts: &'a RunOptions<'_>) -> impl Fn(&Vector) -> Option<f64> + 'a {
    move |x| match (&opts.reference, opts.optimal_value) {
        (Some(r), _) => Some(f.gap(x, r)),
        (None, Some(v)) => Some(f.value(x) - v),
        _ => None,
    }
}

/// Accelerated gradient with step `1/L` and momentum `(k−1)/(k+2)`:
///
/// `x_k = y_{k−1} − ∇f(y_{k−1})/L`, `y_k = x_k + (k−1)/(k+2)·(x_k − x_{k−1})`.
///
/// The trace records `x_k`; `stop_tol` applies to `‖∇f(y_k)‖`.
pub fn nesterov_agd(
    f: &dyn SmoothFunction,
    lipschitz: f64,
    x0: &Vector,
    opts: &RunOptions<'_>,
) -> Result<IterateTrace> {
    opts.validate()?;
    check_lipschitz(lipschitz)?;
    check_dim(f.dim(), x0.len())?;
    let gap = gap_fn(f, opts);
    let mut trace = TraceBuilder::new(x0.len(), opts);
    let mut x = x0.clone();
    let mut y = x0.clone();
    trace.iterate(0, &x, f.value(&x), gap(&x));
    let mut stop = StopReason::MaxIterations;
    for k in 1..=opts.max_iters {
        let g = f.gradient(&y);
        if opts.should_stop(g.norm()) {
            stop = StopReason::Converged;
            break;
        }
        let mut next = y.clone();
        next.axpy(-1.0 / lipschitz, &g);
        guard_iterate(k, &next)?;
        let beta = (k as f64 - 1.0) / (k as f64 + 2.0);
        y = next.clone();
        y.axpy(beta, &(&next - &x));
        trace.step(next.distance(&x));
        x = next;
        trace.iterate(k, &x, f.value(&x), gap(&x));
    }
    Ok(trace.finish("agd", Some(1.0 / lipschitz), stop))
}

/// Constant-momentum accelerated gradient for a `μ`-strongly convex `f` with
/// `L'`-Lipschitz gradient: step `1/L'`, momentum `(√L' − √μ)/(√L' + √μ)`.
pub fn nesterov_strongly_convex(
    f: &dyn SmoothFunction,
    lipschitz: f64,
    mu: f64,
    y0: &Vector,
    opts: &RunOptions<'_>,
) -> Result<IterateTrace> {
    opts.validate()?;
    check_lipschitz(lipschitz)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::invalid(format!("strong convexity modulus must be positive, got {mu}")));
    }
    if mu > lipschitz {
        return Err(Error::invalid("strong convexity modulus exceeds the Lipschitz constant"));
    }
    check_dim(f.dim(), y0.len())?;
    let gap = gap_fn(f, opts);
    let beta = (lipschitz.sqrt() - mu.sqrt()) / (lipschitz.sqrt() + mu.sqrt());
    let mut trace = TraceBuilder::new(y0.len(), opts);
    let mut x = y0.clone();
    let mut v = y0.clone();
    trace.iterate(0, &x, f.value(&x), gap(&x));
    let mut stop = StopReason::MaxIterations;
    for k in 1..=opts.max_iters {
        let g = f.gradient(&v);
        if opts.should_stop(g.norm()) {
            stop = StopReason::Converged;
            break;
        }
        let mut next = v.clone();
        next.axpy(-1.0 / lipschitz, &g);
        guard_iterate(k, &next)?;
        v = next.clone();
        v.axpy(beta, &(&next - &x));
        trace.step(next.distance(&x));
        x = next;
        trace.iterate(k, &x, f.value(&x), gap(&x));
    }
    Ok(trace.finish("agd_strong", Some(1.0 / lipschitz), stop))
}
