//! Iterative solvers with per-iteration diagnostics.

mod dc;
mod nesterov;
mod proximal;
mod trace;
mod tradeoff;

pub(crate) use tradeoff::regularized_minimizer;

pub use dc::{dca, fb_equivalent_pair, forward_backward_dc};
pub use nesterov::{agd_envelope, nesterov_agd, nesterov_strongly_convex, strongly_convex_envelope};
pub use proximal::proximal_point;
pub use trace::{
    IterateTrace, RunOptions, StopReason, TraceMeta, DIVERGENCE_RADIUS, FULL_TRACE_BUDGET, TRACE_EDGE,
};
pub use tradeoff::{tradeoff_analysis, Recommendation, TradeoffConfig, TradeoffReport, WTerms};
