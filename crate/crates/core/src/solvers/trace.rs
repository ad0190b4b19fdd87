use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::operators::{DistanceOracle, InnerSolveConfig};

/// Iterates beyond this norm abort the run.
pub const DIVERGENCE_RADIUS: f64 = 1e8;
/// Traces storing more than this many numbers are stride-thinned.
pub const FULL_TRACE_BUDGET: usize = 1_000_000;
/// Iterations always kept at each end of a thinned trace.
pub const TRACE_EDGE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIterations,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Converged => "converged",
            StopReason::MaxIterations => "max_iterations",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub solver: &'static str,
    pub gamma: Option<f64>,
    /// Number of steps taken; iterates run from `x_0` to `x_iterations`.
    pub iterations: usize,
    pub stop_reason: StopReason,
}

/// Per-iteration record of a solver run.
///
/// Scalar series are always complete: per-iterate series have
/// `iterations + 1` entries and per-step series have `iterations`. Only the
/// stored iterates may be thinned, in which case `iterate_indices` names the
/// iteration of each stored vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateTrace {
    pub iterates: Vec<Vector>,
    pub iterate_indices: Vec<usize>,
    /// 1 for a full trace.
    pub stride: usize,
    pub objective_values: Vec<f64>,
    /// `‖x_{k+1} − x_k‖`
    pub step_norms: Vec<f64>,
    /// `‖r_k‖` for forward-backward DC runs.
    pub residuals: Option<Vec<f64>>,
    pub dist_to_s: Option<Vec<f64>>,
    /// `f(x_k) − f*` against the run's reference point or optimal value.
    pub gaps: Option<Vec<f64>>,
    /// `γ(f(x_{k+1}) − f(x_k)) + ‖x_{k+1} − x_k‖²`, non-positive in exact
    /// arithmetic for forward-backward DC runs.
    pub descent: Option<Vec<f64>>,
    /// Stationarity residual of each resolvent subproblem, when available.
    pub subproblem_residuals: Option<Vec<f64>>,
    pub meta: TraceMeta,
}

impl IterateTrace {
    pub fn last_iterate(&self) -> &Vector {
        self.iterates.last().expect("a trace holds at least x_0")
    }

    pub fn is_thinned(&self) -> bool {
        self.stride > 1
    }

    pub fn final_objective(&self) -> f64 {
        *self.objective_values.last().expect("a trace holds at least f(x_0)")
    }

    /// `Σ_k ‖x_{k+1} − x_k‖²`
    pub fn squared_step_sum(&self) -> f64 {
        self.step_norms.iter().map(|s| s * s).sum()
    }
}

/// Controls shared by the iterative solvers.
#[derive(Debug, Clone, Default)]
pub struct RunOptions<'a> {
    pub max_iters: usize,
    /// Stop once the solver's convergence measure drops to this value;
    /// `None` runs all `max_iters` iterations.
    pub stop_tol: Option<f64>,
    pub distance: Option<&'a dyn DistanceOracle>,
    /// Point at which `f*` is attained; gaps use the function's own
    /// (cancellation-free where available) difference.
    pub reference: Option<Vector>,
    /// Known `f*`, used when no reference point is given.
    pub optimal_value: Option<f64>,
    pub inner: InnerSolveConfig,
}

impl<'a> RunOptions<'a> {
    pub fn iterations(max_iters: usize) -> Self {
        RunOptions {
            max_iters,
            ..Default::default()
        }
    }

    pub fn with_stop_tol(mut self, tol: f64) -> Self {
        self.stop_tol = Some(tol);
        self
    }

    pub fn with_distance(mut self, oracle: &'a dyn DistanceOracle) -> Self {
        self.distance = Some(oracle);
        self
    }

    pub fn with_reference(mut self, x: Vector) -> Self {
        self.reference = Some(x);
        self
    }

    pub fn with_optimal_value(mut self, f: f64) -> Self {
        self.optimal_value = Some(f);
        self
    }

    pub fn with_inner(mut self, inner: InnerSolveConfig) -> Self {
        self.inner = inner;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let Some(t) = self.stop_tol {
            if !(t > 0.0) {
                return Err(Error::invalid(format!("stop tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub(crate) fn should_stop(&self, measure: f64) -> bool {
        self.stop_tol.is_some_and(|t| measure <= t)
    }
}

/// Stores iterates, thinning by a fixed stride when the run would exceed
/// [`FULL_TRACE_BUDGET`] numbers while always keeping both ends.
pub(crate) struct IterateRecorder {
    stride: usize,
    main: Vec<(usize, Vector)>,
    tail: VecDeque<(usize, Vector)>,
}

impl IterateRecorder {
    pub(crate) fn new(dim: usize, max_iters: usize) -> Self {
        let total = dim.max(1).saturating_mul(max_iters.saturating_add(1));
        let stride = if total <= FULL_TRACE_BUDGET {
            1
        } else {
            total.div_ceil(FULL_TRACE_BUDGET)
        };
        IterateRecorder {
            stride,
            main: Vec::new(),
            tail: VecDeque::with_capacity(TRACE_EDGE + 1),
        }
    }

    pub(crate) fn push(&mut self, k: usize, x: &Vector) {
        if self.stride == 1 {
            self.main.push((k, x.clone()));
            return;
        }
        if k < TRACE_EDGE || k.is_multiple_of(self.stride) {
            self.main.push((k, x.clone()));
        }
        if self.tail.len() == TRACE_EDGE {
            self.tail.pop_front();
        }
        self.tail.push_back((k, x.clone()));
    }

    pub(crate) fn finish(self) -> (Vec<Vector>, Vec<usize>, usize) {
        let mut entries = self.main;
        if let Some(&(first_tail, _)) = self.tail.front() {
            entries.retain(|(k, _)| *k < first_tail);
            entries.extend(self.tail);
        }
        let (indices, iterates) = entries.into_iter().unzip();
        (iterates, indices, self.stride)
    }
}

/// Accumulates the series of an [`IterateTrace`].
pub(crate) struct TraceBuilder<'o> {
    recorder: IterateRecorder,
    distance: Option<&'o dyn DistanceOracle>,
    objective_values: Vec<f64>,
    step_norms: Vec<f64>,
    dist_to_s: Vec<f64>,
    gaps: Vec<f64>,
    residuals: Vec<f64>,
    descent: Vec<f64>,
    subproblem_residuals: Vec<f64>,
}

impl<'o> TraceBuilder<'o> {
    pub(crate) fn new(dim: usize, opts: &RunOptions<'o>) -> Self {
        TraceBuilder {
            recorder: IterateRecorder::new(dim, opts.max_iters),
            distance: opts.distance,
            objective_values: Vec::new(),
            step_norms: Vec::new(),
            dist_to_s: Vec::new(),
            gaps: Vec::new(),
            residuals: Vec::new(),
            descent: Vec::new(),
            subproblem_residuals: Vec::new(),
        }
    }

    pub(crate) fn iterate(&mut self, k: usize, x: &Vector, objective: f64, gap: Option<f64>) {
        self.recorder.push(k, x);
        self.objective_values.push(objective);
        if let Some(d) = self.distance {
            self.dist_to_s.push(d.distance(x));
        }
        if let Some(g) = gap {
            self.gaps.push(g);
        }
    }

    pub(crate) fn step(&mut self, norm: f64) {
        self.step_norms.push(norm);
    }

    pub(crate) fn residual(&mut self, r: f64) {
        self.residuals.push(r);
    }

    pub(crate) fn descent(&mut self, d: f64) {
        self.descent.push(d);
    }

    pub(crate) fn subproblem_residual(&mut self, r: f64) {
        self.subproblem_residuals.push(r);
    }

    pub(crate) fn finish(self, solver: &'static str, gamma: Option<f64>, stop_reason: StopReason) -> IterateTrace {
        fn nonempty(v: Vec<f64>) -> Option<Vec<f64>> {
            (!v.is_empty()).then_some(v)
        }
        let iterations = self.step_norms.len();
        let (iterates, iterate_indices, stride) = self.recorder.finish();
        IterateTrace {
            iterates,
            iterate_indices,
            stride,
            objective_values: self.objective_values,
            step_norms: self.step_norms,
            residuals: nonempty(self.residuals),
            dist_to_s: self.distance.map(|_| self.dist_to_s),
            gaps: nonempty(self.gaps),
            descent: nonempty(self.descent),
            subproblem_residuals: nonempty(self.subproblem_residuals),
            meta: TraceMeta {
                solver,
                gamma,
                iterations,
                stop_reason,
            },
        }
    }
}

pub(crate) fn guard_iterate(iteration: usize, x: &Vector) -> Result<()> {
    let norm = x.norm();
    if !(norm <= DIVERGENCE_RADIUS) {
        return Err(Error::Divergence { iteration, norm });
    }
    Ok(())
}
