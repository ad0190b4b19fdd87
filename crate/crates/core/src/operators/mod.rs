//! Structured monotone operators, their resolvents, and continuity moduli.

mod constraint;
mod modulus;
mod probe;
mod resolvent;
mod smooth;
mod spec;

pub use constraint::ConstraintSet;
pub use modulus::{
    modulus_affine_psd, modulus_affine_symmetric, modulus_from_quadratic_growth, scale_modulus,
    ModulusFunction, Provenance, RContinuityCertificate,
};
pub use probe::{
    affine_preimage_samples, affine_tightness_samples, rcontinuity_probe, sign_preimage_samples,
    DistanceOracle, PointSet, ProbeOutcome, ProbeReport, ProbeSample, PROBE_REL_TOL,
};
pub use resolvent::{composite_prox_residual, forward_step, resolvent};
pub use smooth::{
    CallbackFunction, Linear, Quadratic, Regularized, ScaledPlusHalfNorm, SmoothFunction,
};
pub use spec::{AffineOperator, CompositeOperator, InnerSolveConfig, OperatorSpec, FEASIBILITY_TOL};

pub(crate) use resolvent::composite_linearized_min;
