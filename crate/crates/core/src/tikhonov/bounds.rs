//! A-priori error bounds for Tikhonov solutions in terms of a continuity
//! modulus `ρ` and the least-norm magnitude `a = ‖x̃‖`.

use crate::error::{Error, Result};
use crate::operators::RContinuityCertificate;

/// Bounds on `d(x_ε, S)` and `‖x_ε − x̃‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceBounds {
    /// `ρ(εa)`
    pub dist_bound: f64,
    /// `ρ(εa) + √(ρ(εa)² + 2ρ(εa)a)`
    pub rate_bound: f64,
}

/// Bounds for a Lipschitz modulus `ρ(s) = c·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBounds {
    /// `‖x_ε − x*‖ ≤ c·a·ε` for the nearest solution `x*`.
    pub iterate_bound: f64,
    /// `‖x_ε − x̃‖ ≤ a(cε + √(c²ε² + 2cε))`
    pub least_norm_bound: f64,
    /// `f(x_ε) − f* ≤ c·a²·ε²`
    pub gap_bound: f64,
}

/// Checks the smallness condition `ε ≤ σ/a` (vacuous when `a = 0`).
pub fn check_validity(cert: &RContinuityCertificate, eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if cert.a > 0.0 {
        let limit = cert.sigma / cert.a;
        if eps > limit {
            return Err(Error::OutsideValidity { eps, limit });
        }
    }
    Ok(())
}

pub fn distance_and_rate_bounds(cert: &RContinuityCertificate, eps: f64) -> Result<DistanceBounds> {
    check_validity(cert, eps)?;
    let a = cert.a;
    let rho = cert.rho.eval(eps * a);
    Ok(DistanceBounds {
        dist_bound: rho,
        rate_bound: rho + (rho * rho + 2.0 * rho * a).sqrt(),
    })
}

/// `f(x_ε) − f* ≤ a·ρ(εa)·ε` for convex `f` with `A = ∂f`.
pub fn gap_bound(cert: &RContinuityCertificate, eps: f64) -> Result<f64> {
    check_validity(cert, eps)?;
    let a = cert.a;
    Ok(a * cert.rho.eval(eps * a) * eps)
}

pub fn lipschitz_bounds(c: f64, a: f64, eps: f64) -> Result<LipschitzBounds> {
    if !(c >= 0.0) || !(a >= 0.0) {
        return Err(Error::invalid("modulus constant c and magnitude a must be non-negative"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let ce = c * eps;
    Ok(LipschitzBounds {
        iterate_bound: c * a * eps,
        least_norm_bound: a * (ce + (ce * ce + 2.0 * ce).sqrt()),
        gap_bound: c * a * a * eps * eps,
    })
}
