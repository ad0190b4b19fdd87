//! Tikhonov regularization `0 ∈ (A + εI)x_ε` and its a-priori bounds.

mod bounds;
mod path;
mod solve;

pub use bounds::{
    check_validity, distance_and_rate_bounds, gap_bound, lipschitz_bounds, DistanceBounds,
    LipschitzBounds,
};
pub use path::{
    check_schedule, default_schedule, tikhonov_path, PathCheck, PathOptions, PathReport,
    PathViolation, TikhonovPathPoint, MONOTONE_ABS_TOL, PATH_REL_TOL,
};
pub use solve::{least_norm_solution, tikhonov_solve, LeastNormSolution, EPS_FLOOR};
