//! Empirical falsification of R-continuity claims.
//!
//! A probe checks sampled pairs `x ∈ A⁻¹(y)` against `d(x, S) ≤ ρ(‖y‖)`.
//! It can refute a candidate modulus but never certify one.

use super::{AffineOperator, RContinuityCertificate};
use crate::error::Result;
use crate::linalg::{
    default_zero_threshold, eigendecompose, min_norm_solve_with, AffineSolutionSet, Vector,
    DEFAULT_EIGEN_TOL,
};
use crate::rng::SeededRng;

/// Relative slack applied to `ρ(‖y‖)` before a sample counts as a violation.
pub const PROBE_REL_TOL: f64 = 1e-9;

/// Exact distance queries against a solution set `S`.
pub trait DistanceOracle: Send + Sync + std::fmt::Debug {
    fn distance(&self, x: &Vector) -> f64;
}

impl DistanceOracle for AffineSolutionSet {
    fn distance(&self, x: &Vector) -> f64 {
        AffineSolutionSet::distance(self, x)
    }
}

/// A finite solution set, e.g. the isolated critical points of a fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vector>,
}

impl PointSet {
    pub fn new(points: Vec<Vector>) -> Self {
        PointSet { points }
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }
}

impl DistanceOracle for PointSet {
    fn distance(&self, x: &Vector) -> f64 {
        self.points
            .iter()
            .map(|p| p.distance(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A sampled pair with `x ∈ A⁻¹(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    pub y: Vector,
    pub x: Vector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    pub index: usize,
    pub residual_norm: f64,
    pub distance: f64,
    pub bound: f64,
    /// `bound − distance`; negative for a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub outcomes: Vec<ProbeOutcome>,
    /// Indices of samples with `‖y‖ > σ`, outside the certificate.
    pub skipped: Vec<usize>,
    pub violations: Vec<ProbeOutcome>,
    /// `max distance / bound` over checked samples with a positive bound.
    pub max_ratio: f64,
}

impl ProbeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn rcontinuity_probe(
    samples: &[ProbeSample],
    reference: &dyn DistanceOracle,
    cert: &RContinuityCertificate,
) -> ProbeReport {
    let mut outcomes = Vec::with_capacity(samples.len());
    let mut skipped = Vec::new();
    let mut violations = Vec::new();
    let mut max_ratio = 0.0_f64;
    for (index, s) in samples.iter().enumerate() {
        let residual_norm = s.y.norm();
        if residual_norm > cert.sigma {
            skipped.push(index);
            continue;
        }
        let distance = reference.distance(&s.x);
        let bound = cert.rho.eval(residual_norm);
        if bound > 0.0 {
            max_ratio = max_ratio.max(distance / bound);
        }
        let outcome = ProbeOutcome {
            index,
            residual_norm,
            distance,
            bound,
            margin: bound - distance,
        };
        if distance > bound * (1.0 + PROBE_REL_TOL) + f64::MIN_POSITIVE {
            violations.push(outcome.clone());
        }
        outcomes.push(outcome);
    }
    ProbeReport {
        outcomes,
        skipped,
        violations,
        max_ratio,
    }
}

/// Random pairs for `A(x) = Bx − C`: `y ∈ rge(B)` with `‖y‖ ≤ sigma` and
/// `x = B⁺(C + y) + w` for a random kernel component `w`.
pub fn affine_preimage_samples(
    op: &AffineOperator,
    count: usize,
    sigma: f64,
    rng: &mut SeededRng,
) -> Result<Vec<ProbeSample>> {
    let b = op.matrix();
    let n = b.dim();
    let eig = eigendecompose(b, DEFAULT_EIGEN_TOL)?;
    let threshold = default_zero_threshold(b);
    let kernel: Vec<&Vector> = eig.kernel_basis(threshold);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut dir = rng.normal_vector(n);
        for k in &kernel {
            let w = k.dot(&dir);
            dir.axpy(-w, k);
        }
        let norm = dir.norm();
        if norm == 0.0 {
            continue;
        }
        let y = dir.scale(rng.uniform(0.0, 1.0) * sigma / norm);
        let mut x = min_norm_solve_with(b, &eig, &(op.rhs() + &y), threshold)?;
        for k in &kernel {
            x.axpy(rng.normal() * 3.0, k);
        }
        out.push(ProbeSample { y, x });
    }
    Ok(out)
}

/// Pairs with `y` along the eigenvector of the least positive eigenvalue,
/// where `d(x, S) = ‖y‖/k` holds with equality.
pub fn affine_tightness_samples(op: &AffineOperator, count: usize, sigma: f64) -> Result<Vec<ProbeSample>> {
    let b = op.matrix();
    let eig = eigendecompose(b, DEFAULT_EIGEN_TOL)?;
    let threshold = default_zero_threshold(b);
    let direction = eig
        .eigenvalues
        .iter()
        .zip(&eig.eigenvectors)
        .find(|(l, _)| **l > threshold)
        .map(|(_, v)| v.clone())
        .ok_or(crate::error::Error::NoPositiveSpectrum { threshold })?;
    (1..=count)
        .map(|i| {
            let y = direction.scale(sigma * i as f64 / count as f64);
            let x = min_norm_solve_with(b, &eig, &(op.rhs() + &y), threshold)?;
            Ok(ProbeSample { y, x })
        })
        .collect()
}

/// Pairs for the scalar `Sign` map restricted to `|y| ≤ sigma < 1`, where
/// `Sign⁻¹(y) = {0}`.
pub fn sign_preimage_samples(count: usize, sigma: f64, rng: &mut SeededRng) -> Vec<ProbeSample> {
    let s = sigma.min(1.0 - 1e-12);
    (0..count)
        .map(|_| ProbeSample {
            y: Vector::from([rng.uniform(-s, s)]),
            x: Vector::from([0.0]),
        })
        .collect()
}
