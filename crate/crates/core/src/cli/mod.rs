//! Command-line front end: problem files, experiments and reports.
//!
//! Exit codes: 0 all checks pass, 1 usage, 2 invalid input or I/O,
//! 3 numerical failure, 4 invariant violation (artifacts are still written).

mod commands;
mod error;
mod named;
mod problem;
mod report;

pub use commands::{
    certificate, execute, main_with_args, path_experiment, probe_experiment, reproduce_example1, run,
    solve_experiment, trace_rows, tradeoff_experiment, Cli, Command, CommonArgs, Method, ProbeConfig,
    RunOutcome, SolveConfig, CRITICAL_DIST_TOL, DESCENT_TOL, EXAMPLE1_GAP_INTERVAL, SUMMABILITY_TOL,
};
pub use error::CliError;
pub use named::{Huber, LogCosh};
pub use problem::{
    load_problem, parse_problem, write_problem, CompositeSpec, Instance, Metadata, ModulusSpec, ProblemBody,
    ProblemFile, SmoothSpec,
};
pub use report::{emit_report, format_number, render_report, CheckStatus, Report, ReportRow, Violation, REPORT_HEADER};
