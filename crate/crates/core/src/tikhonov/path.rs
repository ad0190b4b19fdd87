use std::fmt;

use super::bounds::{distance_and_rate_bounds, gap_bound};
use super::solve::{least_norm_solution, tikhonov_solve};
use crate::error::{Error, Result};
use crate::linalg::{AffineSolutionSet, Vector};
use crate::operators::{
    DistanceOracle, InnerSolveConfig, OperatorSpec, Quadratic, RContinuityCertificate, SmoothFunction,
};

/// Relative slack for `‖x_ε‖ ≤ ‖x̃‖` and the bound checks.
pub const PATH_REL_TOL: f64 = 1e-9;
/// Absolute slack for `‖x_δ‖ ≤ ‖x_ε‖` when `δ > ε`.
pub const MONOTONE_ABS_TOL: f64 = 1e-10;
/// Absolute floor under the distance and rate checks (roundoff in `d(x, S)`).
const DISTANCE_ABS_TOL: f64 = 1e-14;
/// Absolute floor under the gap check.
const GAP_ABS_TOL: f64 = 1e-18;
/// Relative tolerance of the affine residual identity `(B + εI)x_ε = C`.
const RESIDUAL_REL_TOL: f64 = 1e-9;

/// Geometric schedule `1, 1e−1, …, 1e−7`.
pub fn default_schedule() -> Vec<f64> {
    (0..8).map(|j| format!("1e-{j}").parse().expect("valid literal")).collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PathOptions<'a> {
    pub cert: Option<RContinuityCertificate>,
    /// Solution set used for `d(x_ε, S)`. Affine operators fall back to the
    /// exact set `x̃ + ker B` when omitted.
    pub reference: Option<&'a dyn DistanceOracle>,
    /// Known `f*`, used for measured gaps of non-affine operators.
    pub optimal_value: Option<f64>,
    pub inner: InnerSolveConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovPathPoint {
    pub eps: f64,
    pub x_eps: Vector,
    pub norm_x_eps: f64,
    pub dist_to_s: Option<f64>,
    /// `‖x_ε − x̃‖`, when `x̃` is exact.
    pub error_to_least_norm: Option<f64>,
    /// `None` without a certificate or when `ε` is outside its validity range.
    pub dist_bound: Option<f64>,
    pub rate_bound: Option<f64>,
    pub gap_bound: Option<f64>,
    pub measured_gap: Option<f64>,
    /// `‖(B + εI)x_ε − C‖` for affine operators.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCheck {
    NormAboveLeastNorm,
    NonMonotoneNorm,
    DistanceBound,
    RateBound,
    GapBound,
    ResidualIdentity,
}

impl PathCheck {
    pub fn name(self) -> &'static str {
        match self {
            PathCheck::NormAboveLeastNorm => "norm_above_least_norm",
            PathCheck::NonMonotoneNorm => "non_monotone_norm",
            PathCheck::DistanceBound => "distance_bound",
            PathCheck::RateBound => "rate_bound",
            PathCheck::GapBound => "gap_bound",
            PathCheck::ResidualIdentity => "residual_identity",
        }
    }
}

impl fmt::Display for PathCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathViolation {
    pub eps: f64,
    pub check: PathCheck,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathReport {
    /// Sorted by decreasing `ε`, one per schedule entry.
    pub points: Vec<TikhonovPathPoint>,
    pub x_tilde: Option<Vector>,
    pub x_tilde_approximate: bool,
    pub monotonicity_ok: bool,
    pub violations: Vec<PathViolation>,
}

impl PathReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::invalid("eps schedule is empty"));
    }
    if let Some(bad) = schedule.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::invalid(format!("eps schedule entries must be positive, got {bad}")));
    }
    if let Some(w) = schedule.windows(2).find(|w| w[1] >= w[0]) {
        return Err(Error::invalid(format!(
            "eps schedule must be strictly decreasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

pub fn tikhonov_path(a: &OperatorSpec, schedule: &[f64], opts: &PathOptions<'_>) -> Result<PathReport> {
    check_schedule(schedule)?;

    let least_norm = match least_norm_solution(a, &opts.inner) {
        Ok(ln) => Some(ln),
        Err(e) if matches!(e.root(), Error::InconsistentSystem { .. }) => return Err(e),
        Err(_) => None,
    };
    let exact_tilde = least_norm.as_ref().filter(|ln| !ln.approximate).map(|ln| &ln.x);

    let affine_set = match (a, opts.reference) {
        (OperatorSpec::AffineSymmetric(op), None) => Some(AffineSolutionSet::new(op.matrix(), op.rhs())?),
        _ => None,
    };
    let reference: Option<&dyn DistanceOracle> = match &affine_set {
        Some(s) => Some(s),
        None => opts.reference,
    };
    let affine_objective = match a {
        OperatorSpec::AffineSymmetric(op) => Some(Quadratic::from_affine(op.matrix(), op.rhs())?),
        _ => None,
    };
    let optimal_value = opts
        .optimal_value
        .or_else(|| exact_tilde.map(|t| a.potential(t)));

    let mut points = Vec::with_capacity(schedule.len());
    let mut violations = Vec::new();
    for &eps in schedule {
        let x_eps = tikhonov_solve(a, eps, &opts.inner).map_err(|e| e.at_eps(eps))?;
        let norm_x_eps = x_eps.norm();

        let (dist_bound, rate_bound, gap_bnd) = match &opts.cert {
            Some(cert) => match distance_and_rate_bounds(cert, eps) {
                Ok(b) => (Some(b.dist_bound), Some(b.rate_bound), gap_bound(cert, eps).ok()),
                Err(Error::OutsideValidity { .. }) => (None, None, None),
                Err(e) => return Err(e.at_eps(eps)),
            },
            None => (None, None, None),
        };

        let measured_gap = match (&affine_objective, exact_tilde) {
            (Some(q), Some(t)) => Some(q.gap(&x_eps, t)),
            _ => optimal_value.map(|f| a.potential(&x_eps) - f),
        };
        let residual = match a {
            OperatorSpec::AffineSymmetric(op) => {
                let mut r = op.apply(&x_eps);
                r.axpy(eps, &x_eps);
                Some(r.norm())
            }
            _ => None,
        };

        let point = TikhonovPathPoint {
            eps,
            norm_x_eps,
            dist_to_s: reference.map(|s| s.distance(&x_eps)),
            error_to_least_norm: exact_tilde.map(|t| x_eps.distance(t)),
            dist_bound,
            rate_bound,
            gap_bound: gap_bnd,
            measured_gap,
            residual,
            x_eps,
        };

        let mut flag = |check, measured: f64, bound: f64, ok: bool| {
            if !ok {
                violations.push(PathViolation {
                    eps,
                    check,
                    measured,
                    bound,
                });
            }
        };
        if let Some(t) = exact_tilde {
            let a_norm = t.norm();
            flag(
                PathCheck::NormAboveLeastNorm,
                point.norm_x_eps,
                a_norm,
                point.norm_x_eps <= a_norm * (1.0 + PATH_REL_TOL) + DISTANCE_ABS_TOL,
            );
        }
        if let (Some(d), Some(b)) = (point.dist_to_s, point.dist_bound) {
            flag(PathCheck::DistanceBound, d, b, within(d, b, DISTANCE_ABS_TOL));
        }
        if let (Some(d), Some(b)) = (point.error_to_least_norm, point.rate_bound) {
            flag(PathCheck::RateBound, d, b, within(d, b, DISTANCE_ABS_TOL));
        }
        if let (Some(g), Some(b)) = (point.measured_gap, point.gap_bound) {
            flag(PathCheck::GapBound, g, b, within(g, b, GAP_ABS_TOL));
        }
        if let (Some(r), OperatorSpec::AffineSymmetric(op)) = (point.residual, a) {
            let tol = RESIDUAL_REL_TOL * (1.0 + op.rhs().norm());
            flag(PathCheck::ResidualIdentity, r, tol, r <= tol);
        }
        points.push(point);
    }

    let mut monotonicity_ok = true;
    for w in points.windows(2) {
        // w[0] has the larger eps, so its norm must not exceed w[1]'s.
        if w[0].norm_x_eps > w[1].norm_x_eps + MONOTONE_ABS_TOL {
            monotonicity_ok = false;
            violations.push(PathViolation {
                eps: w[1].eps,
                check: PathCheck::NonMonotoneNorm,
                measured: w[1].norm_x_eps,
                bound: w[0].norm_x_eps,
            });
        }
    }

    Ok(PathReport {
        points,
        x_tilde: least_norm.as_ref().map(|ln| ln.x.clone()),
        x_tilde_approximate: least_norm.as_ref().is_some_and(|ln| ln.approximate),
        monotonicity_ok,
        violations,
    })
}

fn within(measured: f64, bound: f64, abs_tol: f64) -> bool {
    measured <= bound * (1.0 + PATH_REL_TOL) + abs_tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1_operator;
    use crate::linalg::SymmetricMatrix;
    use crate::operators::{modulus_affine_psd, CompositeOperator, ConstraintSet, PointSet};

    fn example1_cert() -> RContinuityCertificate {
        let rho = modulus_affine_psd(&crate::fixtures::example1_matrix()).unwrap();
        RContinuityCertificate::global(14f64.sqrt(), rho).unwrap()
    }

    #[test]
    fn default_schedule_is_geometric() {
        let s = default_schedule();
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], 1.0);
        assert_eq!(s[3], 1e-3);
        assert_eq!(s[7], 1e-7);
        assert!(check_schedule(&s).is_ok());
    }

    #[test]
    fn example1_path_is_clean() {
        let opts = PathOptions {
            cert: Some(example1_cert()),
            ..Default::default()
        };
        let report = tikhonov_path(&example1_operator(), &[1e-1, 1e-3, 1e-5], &opts).unwrap();
        assert!(report.monotonicity_ok);
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(!report.x_tilde_approximate);
        for p in &report.points {
            assert!(p.dist_to_s.unwrap() <= p.dist_bound.unwrap());
            assert!(p.error_to_least_norm.unwrap() <= p.rate_bound.unwrap());
            assert!(p.measured_gap.unwrap() <= p.gap_bound.unwrap());
        }
        let last = report.points.last().unwrap();
        // exact rational solve of (B + εI)x = C gives ½⟨B d, d⟩ = 2.7776975382e−12
        let g = last.measured_gap.unwrap();
        assert!((g / 2.7776975382041346e-12 - 1.0).abs() < 1e-6, "gap {g:e}");
    }

    #[test]
    fn identity_path_is_zero() {
        let a = OperatorSpec::affine(SymmetricMatrix::identity(3), Vector::zeros(3)).unwrap();
        let rho = modulus_affine_psd(&SymmetricMatrix::identity(3)).unwrap();
        let opts = PathOptions {
            cert: Some(RContinuityCertificate::global(0.0, rho).unwrap()),
            ..Default::default()
        };
        let report = tikhonov_path(&a, &default_schedule(), &opts).unwrap();
        assert!(report.is_clean() && report.monotonicity_ok);
        for p in &report.points {
            assert_eq!(p.x_eps, Vector::zeros(3));
            assert_eq!((p.dist_bound, p.rate_bound, p.gap_bound), (Some(0.0), Some(0.0), Some(0.0)));
        }
    }

    #[test]
    fn bad_schedules_rejected() {
        let a = example1_operator();
        let opts = PathOptions::default();
        for s in [vec![1e-3, 1e-1], vec![1e-2, 1e-2], vec![], vec![1.0, -1.0]] {
            assert!(matches!(tikhonov_path(&a, &s, &opts), Err(Error::InvalidArgument(_))));
        }
    }

    #[test]
    fn composite_path_uses_supplied_reference() {
        // g = ½(x−2)² on [−1, 1]: S = {1}, f* = 0.5
        let op = CompositeOperator::new(
            SymmetricMatrix::identity(1),
            Vector::from([-2.0]),
            ConstraintSet::cube(1, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let a = OperatorSpec::SubdifferentialComposite(op);
        let s = PointSet::new(vec![Vector::from([1.0])]);
        let opts = PathOptions {
            reference: Some(&s),
            optimal_value: Some(-1.5),
            ..Default::default()
        };
        let report = tikhonov_path(&a, &[1.0, 0.1], &opts).unwrap();
        assert!(report.x_tilde_approximate);
        for p in &report.points {
            assert!(p.dist_to_s.unwrap() < 1e-12);
            assert!(p.measured_gap.unwrap().abs() < 1e-12);
            assert!(p.residual.is_none());
        }
        let bare = tikhonov_path(&a, &[1.0], &PathOptions::default()).unwrap();
        assert!(bare.points[0].dist_to_s.is_none());
    }

    #[test]
    fn outside_validity_leaves_bounds_unavailable() {
        let rho = modulus_affine_psd(&crate::fixtures::example1_matrix()).unwrap();
        let cert = RContinuityCertificate::new(1e-3, 14f64.sqrt(), rho, true).unwrap();
        let opts = PathOptions {
            cert: Some(cert),
            ..Default::default()
        };
        let report = tikhonov_path(&example1_operator(), &[1.0, 1e-5], &opts).unwrap();
        assert!(report.points[0].dist_bound.is_none());
        assert!(report.points[1].dist_bound.is_some());
    }
}
