//! Regularize-then-accelerate versus direct acceleration.
//!
//! Running the strongly convex scheme on `g = f + (ε/2)‖·‖²` gives
//! `f(y_k) − f* ≤ W_k + R(ε)` with
//! `W_k = g(y_k) − g(x_ε) + (ε/2)‖y_k − x_ε‖² + εa‖y_k − x_ε‖` and
//! `R(ε) = εaρ(εa)`. `W_k` decays geometrically while `R(ε)` does not depend
//! on `k`, so the comparison with the direct bound `2L‖y_0 − x*‖²/(k+2)²`
//! depends on the iteration budget.

use std::fmt;
use std::sync::Arc;

use super::nesterov::{agd_envelope, nesterov_strongly_convex, strongly_convex_envelope};
use super::trace::RunOptions;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{solve_shifted, AffineSolutionSet, Vector};
use crate::operators::{
    resolvent, InnerSolveConfig, OperatorSpec, RContinuityCertificate, Regularized, SmoothFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recommendation {
    Regularize,
    Direct,
}

impl fmt::Display for Recommendation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recommendation::Regularize => "regularize",
            Recommendation::Direct => "direct",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TradeoffConfig {
    /// Lipschitz constant of `∇f` used by both schemes and both bounds.
    pub lipschitz: f64,
    pub eps: f64,
    pub y0: Vector,
    pub budget: usize,
    /// A minimizer `x*` for the direct bound. Quadratics default to the
    /// minimizer nearest `y0`.
    pub minimizer: Option<Vector>,
    pub inner: InnerSolveConfig,
}

/// The three measured terms of `W_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WTerms {
    /// `g(y_k) − g(x_ε)`
    pub gap: f64,
    /// `(ε/2)‖y_k − x_ε‖²`
    pub quadratic: f64,
    /// `εa‖y_k − x_ε‖`
    pub linear: f64,
}

impl WTerms {
    pub fn total(&self) -> f64 {
        self.gap + self.quadratic + self.linear
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub eps: f64,
    pub budget: usize,
    /// Measured from a run, not predictive. `None` when `ε = 0`.
    pub w_terms: Option<WTerms>,
    pub w_k: Option<f64>,
    pub r_eps: f64,
    /// `2S_k + εa√(2S_k/ε) + R(ε)`: an a-priori bound on `W_k + R(ε)` from
    /// the strongly convex envelope `S_k` alone.
    pub predictive_bound: f64,
    pub direct_bound: f64,
    /// `(k, S_k)` at `k = 0, 1, 2, 4, …` and the budget.
    pub regularized_bound_curve: Vec<(usize, f64)>,
    pub recommendation: Recommendation,
    /// First `k` with `2L‖y_0 − x*‖²/(k+2)² ≤ R(ε)`: from there on the
    /// direct bound beats regularization even if `W_k` were zero.
    pub crossing_iteration: Option<usize>,
}

pub(crate) fn regularized_minimizer(f: &Arc<dyn SmoothFunction>, eps: f64, inner: &InnerSolveConfig) -> Result<Vector> {
    match f.as_quadratic() {
        Some(q) => solve_shifted(q.matrix(), eps, 1.0, &-q.linear()),
        // x_ε = J_{∇f/ε}(0)
        None => resolvent(&OperatorSpec::SmoothGradient(f.clone()), 1.0 / eps, &Vector::zeros(f.dim()), inner),
    }
}

fn default_minimizer(f: &dyn SmoothFunction, y0: &Vector) -> Result<Vector> {
    let q = f.as_quadratic().ok_or_else(|| {
        Error::invalid("a minimizer x* must be supplied for non-quadratic objectives")
    })?;
    Ok(AffineSolutionSet::new(q.matrix(), &-q.linear())?.project(y0))
}

fn curve_points(budget: usize) -> Vec<usize> {
    let mut ks = vec![0];
    let mut k = 1;
    while k < budget {
        ks.push(k);
        k *= 2;
    }
    if budget > 0 {
        ks.push(budget);
    }
    ks
}

pub fn tradeoff_analysis(
    f: Arc<dyn SmoothFunction>,
    cert: Option<&RContinuityCertificate>,
    cfg: &TradeoffConfig,
) -> Result<TradeoffReport> {
    let cert = cert.ok_or_else(|| Error::invalid("trade-off analysis needs an R-continuity certificate"))?;
    let (l, eps, k) = (cfg.lipschitz, cfg.eps, cfg.budget);
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::invalid(format!("Lipschitz constant must be positive, got {l}")));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be non-negative, got {eps}")));
    }
    check_dim(f.dim(), cfg.y0.len())?;
    let a = cert.a;

    let x_star = match &cfg.minimizer {
        Some(x) => {
            check_dim(f.dim(), x.len())?;
            x.clone()
        }
        None => default_minimizer(f.as_ref(), &cfg.y0)?,
    };
    let direct_bound = agd_envelope(l, cfg.y0.distance(&x_star).powi(2), k);

    let r_eps = eps * a * cert.rho.eval(eps * a);
    let crossing_iteration = (r_eps > 0.0).then(|| {
        let d2 = cfg.y0.distance(&x_star).powi(2);
        let k_real = (2.0 * l * d2 / r_eps).sqrt() - 2.0;
        let mut kc = k_real.max(0.0).ceil() as usize;
        // settle rounding at the boundary
        while kc > 0 && agd_envelope(l, d2, kc - 1) <= r_eps {
            kc -= 1;
        }
        while agd_envelope(l, d2, kc) > r_eps {
            kc += 1;
        }
        kc
    });

    if eps == 0.0 {
        // Without regularization both sides are envelopes of the convex
        // problem: S_k collapses to (L/2)‖y_0 − x*‖².
        let d2 = cfg.y0.distance(&x_star).powi(2);
        let s_k = strongly_convex_envelope(l, 0.0, d2, k);
        let curve = curve_points(k)
            .into_iter()
            .map(|j| (j, strongly_convex_envelope(l, 0.0, d2, j)))
            .collect();
        return Ok(TradeoffReport {
            eps,
            budget: k,
            w_terms: None,
            w_k: None,
            r_eps: 0.0,
            predictive_bound: s_k,
            direct_bound,
            regularized_bound_curve: curve,
            recommendation: if s_k < direct_bound {
                Recommendation::Regularize
            } else {
                Recommendation::Direct
            },
            crossing_iteration: None,
        });
    }

    let x_eps = regularized_minimizer(&f, eps, &cfg.inner)?;
    let g = Regularized::new(f.clone(), eps);
    let opts = RunOptions::iterations(k).with_reference(x_eps.clone()).with_inner(cfg.inner);
    let run = nesterov_strongly_convex(&g, l + eps, eps, &cfg.y0, &opts)?;
    let y_k = run.last_iterate();
    let dist = y_k.distance(&x_eps);
    let w_terms = WTerms {
        gap: g.gap(y_k, &x_eps),
        quadratic: 0.5 * eps * dist * dist,
        linear: eps * a * dist,
    };
    let w_k = w_terms.total();

    let d2 = cfg.y0.distance(&x_eps).powi(2);
    let s_k = strongly_convex_envelope(l, eps, d2, k);
    let predictive_bound = 2.0 * s_k + eps * a * (2.0 * s_k / eps).sqrt() + r_eps;
    let curve = curve_points(k)
        .into_iter()
        .map(|j| (j, strongly_convex_envelope(l, eps, d2, j)))
        .collect();

    Ok(TradeoffReport {
        eps,
        budget: k,
        w_terms: Some(w_terms),
        w_k: Some(w_k),
        r_eps,
        predictive_bound,
        direct_bound,
        regularized_bound_curve: curve,
        recommendation: if w_k + r_eps < direct_bound {
            Recommendation::Regularize
        } else {
            Recommendation::Direct
        },
        crossing_iteration,
    })
}
