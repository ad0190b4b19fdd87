//! JSON problem files.
//!
//! ```json
//! { "kind": "quadratic", "name": "example1",
//!   "matrix": [[22, 46, 68], [46, 97, 143], [68, 143, 211]],
//!   "rhs": [318, 669, 987],
//!   "metadata": { "x0": [5, 2, 3], "lipschitz": 330 } }
//! ```
//!
//! Kinds: `quadratic` (`A(x) = Bx − C`, potential `½⟨Bx,x⟩ − ⟨C,x⟩`),
//! `composite` (`∂(½⟨Qx,x⟩ + ⟨q,x⟩ + I_K)`), `dc` (composite `g` minus
//! smooth `h`), `smooth-named` (`∇f` for a named function) and `sign`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::error::CliError;
use super::named::{Huber, LogCosh};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{SymmetricMatrix, Vector};
use crate::operators::{
    AffineOperator, CompositeOperator, ConstraintSet, Linear, ModulusFunction, OperatorSpec, PointSet,
    Provenance, Quadratic, SmoothFunction,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub body: ProblemBody,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemBody {
    Quadratic { matrix: SymmetricMatrix, rhs: Vector },
    Composite(CompositeSpec),
    Dc { g: CompositeSpec, h: SmoothSpec },
    SmoothNamed { function: SmoothSpec },
    Sign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeSpec {
    pub quad: SymmetricMatrix,
    pub lin: Vector,
    #[serde(default = "whole_space")]
    pub set: ConstraintSet,
}

fn whole_space() -> ConstraintSet {
    ConstraintSet::WholeSpace
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SmoothSpec {
    /// `½⟨Mx,x⟩ + ⟨b,x⟩`
    Quadratic { matrix: SymmetricMatrix, linear: Vector },
    Linear { coeffs: Vector },
    Huber { center: Vector, delta: f64 },
    LogCosh { center: Vector },
}

/// A user-supplied modulus `ρ(s) = c·s^α`, valid for `‖y‖ ≤ sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusSpec {
    pub c: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    /// Omitted for a global statement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    /// Known solution (critical) set as a finite list of points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_points: Option<Vec<Vector>>,
    /// Known `f*`, or a lower bound on `f` for DC problems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<ModulusSpec>,
    /// Lipschitz constant of the gradient used by accelerated methods.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vector>,
    /// A minimizer `x*` for the accelerated-gradient envelope.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimizer: Option<Vector>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

/// A validated problem ready to run.
#[derive(Debug, Clone)]
pub enum Instance {
    Affine(AffineOperator),
    Composite(CompositeOperator),
    Dc { g: OperatorSpec, h: Arc<dyn SmoothFunction> },
    Smooth(Arc<dyn SmoothFunction>),
    Sign,
}

impl Instance {
    pub fn dim(&self) -> usize {
        match self {
            Instance::Affine(a) => a.matrix().dim(),
            Instance::Composite(c) => c.dim(),
            Instance::Dc { h, .. } => h.dim(),
            Instance::Smooth(f) => f.dim(),
            Instance::Sign => 1,
        }
    }

    /// The monotone operator, for every kind except `dc`.
    pub fn operator(&self) -> Result<OperatorSpec> {
        Ok(match self {
            Instance::Affine(a) => OperatorSpec::AffineSymmetric(a.clone()),
            Instance::Composite(c) => OperatorSpec::SubdifferentialComposite(c.clone()),
            Instance::Smooth(f) => OperatorSpec::SmoothGradient(f.clone()),
            Instance::Sign => OperatorSpec::Sign,
            Instance::Dc { .. } => {
                return Err(Error::Unsupported(
                    "this command needs a monotone operator, not a dc problem".into(),
                ))
            }
        })
    }

    /// The smooth objective minimized by gradient methods.
    pub fn smooth_objective(&self) -> Result<Arc<dyn SmoothFunction>> {
        match self {
            Instance::Affine(a) => Ok(Arc::new(Quadratic::from_affine(a.matrix(), a.rhs())?)),
            Instance::Smooth(f) => Ok(f.clone()),
            _ => Err(Error::Unsupported(
                "this command needs a quadratic or smooth-named problem".into(),
            )),
        }
    }

    pub fn dc_pair(&self) -> Result<(&OperatorSpec, &Arc<dyn SmoothFunction>)> {
        match self {
            Instance::Dc { g, h } => Ok((g, h)),
            _ => Err(Error::Unsupported("this command needs a dc problem".into())),
        }
    }
}

impl SmoothSpec {
    pub fn build(&self) -> Result<Arc<dyn SmoothFunction>> {
        Ok(match self {
            SmoothSpec::Quadratic { matrix, linear } => Arc::new(Quadratic::new(matrix.clone(), linear.clone())?),
            SmoothSpec::Linear { coeffs } => Arc::new(Linear::new(coeffs.clone())),
            SmoothSpec::Huber { center, delta } => {
                if !(*delta > 0.0) || !delta.is_finite() {
                    return Err(Error::invalid("huber delta must be positive"));
                }
                Arc::new(Huber {
                    center: center.clone(),
                    delta: *delta,
                })
            }
            SmoothSpec::LogCosh { center } => Arc::new(LogCosh {
                center: center.clone(),
            }),
        })
    }
}

impl CompositeSpec {
    pub fn build(&self) -> Result<CompositeOperator> {
        CompositeOperator::new(self.quad.clone(), self.lin.clone(), self.set.clone())
    }
}

impl ProblemFile {
    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or(match self.body {
            ProblemBody::Quadratic { .. } => "quadratic",
            ProblemBody::Composite(_) => "composite",
            ProblemBody::Dc { .. } => "dc",
            ProblemBody::SmoothNamed { .. } => "smooth-named",
            ProblemBody::Sign => "sign",
        })
    }

    /// Checks every dimension and builds the operators.
    pub fn build(&self) -> Result<Instance> {
        let instance = match &self.body {
            ProblemBody::Quadratic { matrix, rhs } => Instance::Affine(AffineOperator::new(matrix.clone(), rhs.clone())?),
            ProblemBody::Composite(c) => Instance::Composite(c.build()?),
            ProblemBody::Dc { g, h } => {
                let g = OperatorSpec::SubdifferentialComposite(g.build()?);
                let h = h.build()?;
                check_dim(g.dim().unwrap_or(0), h.dim())?;
                Instance::Dc { g, h }
            }
            ProblemBody::SmoothNamed { function } => Instance::Smooth(function.build()?),
            ProblemBody::Sign => Instance::Sign,
        };
        let n = instance.dim();
        let m = &self.metadata;
        for v in [&m.x0, &m.minimizer].into_iter().flatten() {
            check_dim(n, v.len())?;
        }
        for p in m.solution_points.iter().flatten() {
            check_dim(n, p.len())?;
        }
        if let Some(spec) = &m.modulus {
            spec.modulus()?;
            if let Some(s) = spec.sigma {
                if !(s > 0.0) {
                    return Err(Error::invalid("modulus sigma must be positive"));
                }
            }
        }
        if let Some(l) = m.lipschitz {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::invalid("lipschitz must be positive and finite"));
            }
        }
        Ok(instance)
    }

    pub fn solution_points(&self) -> Option<PointSet> {
        self.metadata.solution_points.clone().map(PointSet::new)
    }
}

impl ModulusSpec {
    pub fn modulus(&self) -> Result<ModulusFunction> {
        ModulusFunction::new(self.c, self.alpha, Provenance::UserSupplied)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or(f64::INFINITY)
    }
}

/// Parses and validates a problem file.
pub fn load_problem(path: &Path) -> std::result::Result<ProblemFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let problem = parse_problem(&text).map_err(|e| e.with_path(path))?;
    Ok(problem)
}

pub fn parse_problem(text: &str) -> std::result::Result<ProblemFile, CliError> {
    let problem: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: String::new(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    problem.build().map_err(CliError::from)?;
    Ok(problem)
}

pub fn write_problem(problem: &ProblemFile, path: &Path) -> std::result::Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(problem).expect("problem files serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, &e))
}
