use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::Vector;

/// Closed convex set `K` used in indicator terms `I_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub enum ConstraintSet {
    WholeSpace,
    Box { lower: Vector, upper: Vector },
    Ball { center: Vector, radius: f64 },
}

impl ConstraintSet {
    pub fn new_box(lower: Vector, upper: Vector) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::invalid("box must have dimension at least 1"));
        }
        for (i, (l, u)) in lower.iter().zip(upper.iter()).enumerate() {
            if l.is_nan() || u.is_nan() || l > u {
                return Err(Error::invalid(format!(
                    "box bounds violate lower <= upper at coordinate {i} ({l} > {u})"
                )));
            }
        }
        Ok(ConstraintSet::Box { lower, upper })
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new_box(Vector::new(vec![lo; n]), Vector::new(vec![hi; n]))
    }

    pub fn new_ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("ball radius must be positive and finite"));
        }
        if center.is_empty() || !center.is_finite() {
            return Err(Error::invalid("ball center must be a finite vector"));
        }
        Ok(ConstraintSet::Ball { center, radius })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            ConstraintSet::WholeSpace => None,
            ConstraintSet::Box { lower, .. } => Some(lower.len()),
            ConstraintSet::Ball { center, .. } => Some(center.len()),
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            ConstraintSet::WholeSpace => false,
            ConstraintSet::Box { lower, upper } => {
                lower.is_finite() && upper.is_finite()
            }
            ConstraintSet::Ball { .. } => true,
        }
    }

    /// Exact Euclidean projection.
    pub fn project(&self, x: &Vector) -> Vector {
        match self {
            ConstraintSet::WholeSpace => x.clone(),
            ConstraintSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .map(|(v, (l, u))| v.clamp(*l, *u))
                .collect::<Vec<_>>()
                .into(),
            ConstraintSet::Ball { center, radius } => {
                let d = x - center;
                let norm = d.norm();
                if norm <= *radius {
                    x.clone()
                } else {
                    let mut out = center.clone();
                    out.axpy(radius / norm, &d);
                    out
                }
            }
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        match self {
            ConstraintSet::WholeSpace => true,
            ConstraintSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            ConstraintSet::Ball { center, radius } => x.distance(center) <= radius + tol,
        }
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(d) => check_dim(n, d),
            None => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawSet {
    WholeSpace,
    Box { lower: Vector, upper: Vector },
    Ball { center: Vector, radius: f64 },
}

impl TryFrom<RawSet> for ConstraintSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        match raw {
            RawSet::WholeSpace => Ok(ConstraintSet::WholeSpace),
            RawSet::Box { lower, upper } => ConstraintSet::new_box(lower, upper),
            RawSet::Ball { center, radius } => ConstraintSet::new_ball(center, radius),
        }
    }
}

impl From<ConstraintSet> for RawSet {
    fn from(set: ConstraintSet) -> Self {
        match set {
            ConstraintSet::WholeSpace => RawSet::WholeSpace,
            ConstraintSet::Box { lower, upper } => RawSet::Box { lower, upper },
            ConstraintSet::Ball { center, radius } => RawSet::Ball { center, radius },
        }
    }
}
