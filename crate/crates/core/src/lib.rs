//! Tikhonov regularization of monotone inclusions `0 ∈ A(x)` with a-priori
//! error bounds driven by R-continuity moduli, plus forward-backward
//! splitting and DCA for difference-of-convex programs.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`]: dense symmetric eigendecomposition, spectral bounds,
//!   minimum-norm solves and kernel/range projections.
//! * [`operators`]: structured operators, resolvents, continuity moduli and
//!   the R-continuity probe.
//! * [`tikhonov`]: the regularization path `x_ε` and its bound certificates.
//! * [`solvers`]: proximal point, Nesterov (convex and strongly convex),
//!   forward-backward DC splitting, DCA and the regularize-vs-direct analyzer.
//! * [`cli`]: problem files, experiments and CSV reports behind the
//!   `monoreg` binary.

// `!(x > 0.0)` is used on purpose so NaN fails validation; dense kernels index.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod operators;
pub mod rng;
pub mod solvers;
pub mod tikhonov;

pub use error::{Error, Result};
pub use linalg::{SymmetricMatrix, Vector};
