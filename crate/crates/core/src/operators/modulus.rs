//! Continuity moduli `ρ(s) = c·s^α` and the constructors that produce them
//! from spectral data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    default_zero_threshold, eigendecompose, least_positive_of, spectral_radius, SymmetricMatrix,
    DEFAULT_EIGEN_TOL,
};

/// Which construction produced a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `1/k` for `x ↦ Bx − C` with `B ⪰ 0`, `k` the least positive eigenvalue.
    AffinePsd,
    /// `‖B‖/k₂` for symmetric `B`, `k₂` the least positive eigenvalue of `B²`.
    AffineSymmetric,
    /// `2/κ` for `∇f` when `f` has quadratic functional growth with constant `κ`.
    QuadraticGrowth,
    UserSupplied,
}

/// `ρ(s) = c · s^α`, non-decreasing with `ρ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusFunction {
    pub c: f64,
    pub alpha: f64,
    pub provenance: Provenance,
}

impl ModulusFunction {
    pub fn new(c: f64, alpha: f64, provenance: Provenance) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::invalid("modulus constant must be finite and non-negative"));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::invalid("modulus exponent must be positive"));
        }
        Ok(ModulusFunction {
            c,
            alpha,
            provenance,
        })
    }

    /// `ρ(s) = c·s`
    pub fn lipschitz(c: f64, provenance: Provenance) -> Result<Self> {
        Self::new(c, 1.0, provenance)
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if self.alpha == 1.0 {
            self.c * s
        } else {
            self.c * s.powf(self.alpha)
        }
    }

    pub fn is_lipschitz(&self) -> bool {
        self.alpha == 1.0
    }
}

/// Validity radius `σ`, least-norm magnitude `a` and modulus `ρ` of an
/// R-continuity statement for `A⁻¹` at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RContinuityCertificate {
    pub sigma: f64,
    pub a: f64,
    pub rho: ModulusFunction,
    /// Inclusion asserted only for the `a`-ball truncation.
    pub truncated: bool,
}

impl RContinuityCertificate {
    pub fn new(sigma: f64, a: f64, rho: ModulusFunction, truncated: bool) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid("validity radius sigma must be positive"));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::invalid("least-norm magnitude a must be finite and non-negative"));
        }
        Ok(RContinuityCertificate {
            sigma,
            a,
            rho,
            truncated,
        })
    }

    /// Certificate valid for every residual size (`σ = ∞`).
    pub fn global(a: f64, rho: ModulusFunction) -> Result<Self> {
        Self::new(f64::INFINITY, a, rho, false)
    }
}

/// `ρ(s) = s / k` with `k` the least positive eigenvalue of a PSD `B`.
pub fn modulus_affine_psd(b: &SymmetricMatrix) -> Result<ModulusFunction> {
    let eig = eigendecompose(b, DEFAULT_EIGEN_TOL)?;
    let norm = spectral_radius(&eig);
    if eig.eigenvalues[0] < -1e-9 * norm {
        return Err(Error::invalid(format!(
            "matrix is not positive semidefinite (smallest eigenvalue {:e})",
            eig.eigenvalues[0]
        )));
    }
    let k = least_positive_of(&eig, default_zero_threshold(b))?;
    ModulusFunction::lipschitz(1.0 / k, Provenance::AffinePsd)
}

/// `ρ(s) = (‖B‖/k₂)·s` with `k₂` the least positive eigenvalue of `B²`.
///
/// The eigenvalues of `B²` are the squares `λ_i²`, so `k₂` is read off the
/// spectrum of `B` rather than from an explicitly formed square.
pub fn modulus_affine_symmetric(b: &SymmetricMatrix) -> Result<ModulusFunction> {
    let eig = eigendecompose(b, DEFAULT_EIGEN_TOL)?;
    let threshold = default_zero_threshold(b);
    let norm = spectral_radius(&eig);
    let k2 = eig
        .eigenvalues
        .iter()
        .filter(|l| l.abs() > threshold)
        .map(|l| l * l)
        .fold(f64::INFINITY, f64::min);
    if !k2.is_finite() {
        return Err(Error::NoPositiveSpectrum { threshold });
    }
    ModulusFunction::lipschitz(norm / k2, Provenance::AffineSymmetric)
}

/// `ρ(s) = (2/κ)·s` for `f − f* ≥ (κ/2)·d(·, S)²`.
pub fn modulus_from_quadratic_growth(kappa: f64) -> Result<ModulusFunction> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::invalid("growth constant kappa must be positive"));
    }
    ModulusFunction::lipschitz(2.0 / kappa, Provenance::QuadraticGrowth)
}

/// Modulus of `(kA)⁻¹` from that of `A⁻¹`: `c' = c/|k|` (Lipschitz moduli only).
pub fn scale_modulus(rho: &ModulusFunction, k: f64) -> Result<ModulusFunction> {
    if !rho.is_lipschitz() {
        return Err(Error::Unsupported(
            "scaling is defined for Lipschitz moduli (alpha = 1) only".into(),
        ));
    }
    if k == 0.0 || !k.is_finite() {
        return Err(Error::invalid("operator scaling factor must be finite and nonzero"));
    }
    ModulusFunction::lipschitz(rho.c / k.abs(), rho.provenance)
}
