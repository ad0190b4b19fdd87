use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::error::CliError;
use super::problem::{load_problem, Instance, ProblemFile};
use super::report::Report;
use crate::error::{check_dim, Error, Result};
use crate::fixtures::{example1, example1_affine, example1_objective, example1_operator};
use crate::linalg::{AffineSolutionSet, Vector};
use crate::operators::{
    affine_preimage_samples, affine_tightness_samples, modulus_affine_psd, modulus_affine_symmetric,
    rcontinuity_probe, sign_preimage_samples, DistanceOracle, InnerSolveConfig, ModulusFunction,
    OperatorSpec, PointSet, ProbeSample, RContinuityCertificate, Regularized, SmoothFunction,
};
use crate::rng::SeededRng;
use crate::solvers::{
    agd_envelope, dca, forward_backward_dc, nesterov_agd, nesterov_strongly_convex, proximal_point,
    regularized_minimizer, strongly_convex_envelope, tradeoff_analysis, IterateTrace, RunOptions,
    StopReason, TradeoffConfig,
};
use crate::tikhonov::{
    check_schedule, default_schedule, distance_and_rate_bounds, gap_bound, least_norm_solution,
    tikhonov_path, PathCheck, PathOptions, PathReport,
};

/// Per-iteration slack of the forward-backward descent inequality.
pub const DESCENT_TOL: f64 = 1e-8;
/// Slack of the summability bound `Σ‖Δ‖² ≤ γ(f(x_0) − f_low)`.
pub const SUMMABILITY_TOL: f64 = 1e-6;
/// Distance to the known critical set accepted for a converged DC run.
pub const CRITICAL_DIST_TOL: f64 = 1e-4;
/// Relative slack for envelope and monotonicity checks on measured series.
const SERIES_REL_TOL: f64 = 1e-9;
const SERIES_ABS_TOL: f64 = 1e-15;

#[derive(Debug, Parser)]
#[command(
    name = "monoreg",
    version,
    about = "Tikhonov regularization paths, R-continuity probes and DC splitting with a-priori bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Problem file (JSON).
    #[arg(long)]
    pub problem: PathBuf,
    /// Seed for every random draw; recorded in each output row.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for report.csv and summary.txt.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ppa,
    Agd,
    AgdStrong,
    FbDc,
    Dca,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Regularization path x_ε over a decreasing ε schedule, with bound checks.
    TikhonovPath {
        #[command(flatten)]
        common: CommonArgs,
        /// Strictly decreasing, comma separated (default 1, 1e-1, ..., 1e-7).
        #[arg(long, value_delimiter = ',')]
        eps_schedule: Option<Vec<f64>>,
    },
    /// Run one iterative solver and audit its trace.
    Solve {
        #[arg(value_enum)]
        method: Method,
        #[command(flatten)]
        common: CommonArgs,
        /// Step size for ppa and fb-dc.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        /// Stop once the solver's convergence measure reaches this value.
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        /// Starting point; defaults to the problem's x0 or the origin.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Option<Vec<f64>>,
        /// Regularization level for agd-strong.
        #[arg(long, default_value_t = 1e-5, allow_negative_numbers = true)]
        eps: f64,
        /// Gradient Lipschitz constant for agd and agd-strong.
        #[arg(long)]
        lipschitz: Option<f64>,
    },
    /// Compare regularize-then-accelerate against direct acceleration.
    Tradeoff {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1e-5, allow_negative_numbers = true)]
        eps: f64,
        /// Iteration budget.
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Option<Vec<f64>>,
        #[arg(long)]
        lipschitz: Option<f64>,
    },
    /// Sample pairs x ∈ A⁻¹(y) and test d(x, S) ≤ ρ(‖y‖).
    Probe {
        #[command(flatten)]
        common: CommonArgs,
        /// Random samples.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Extra samples along the least-positive eigenvector (affine only).
        #[arg(long, default_value_t = 10)]
        tightness: usize,
        /// Largest sampled ‖y‖.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Multiplies the modulus constant before probing.
        #[arg(long, default_value_t = 1.0)]
        modulus_scale: f64,
    },
    /// Re-run the 3×3 singular quadratic example and compare with its reference values.
    ReproduceExample1 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

impl Command {
    pub fn out_dir(&self) -> &PathBuf {
        match self {
            Command::TikhonovPath { common, .. }
            | Command::Solve { common, .. }
            | Command::Tradeoff { common, .. }
            | Command::Probe { common, .. } => &common.out,
            Command::ReproduceExample1 { out, .. } => out,
        }
    }
}

/// A completed run: its report and exit status (0 clean, 4 violations).
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
}

/// Runs the command and writes `report.csv` and `summary.txt`.
pub fn run(command: &Command) -> std::result::Result<RunOutcome, CliError> {
    let report = execute(command)?;
    report.write(command.out_dir())?;
    let exit_code = if report.is_clean() { 0 } else { 4 };
    Ok(RunOutcome { report, exit_code })
}

/// Runs the command without touching the filesystem beyond the problem file.
pub fn execute(command: &Command) -> std::result::Result<Report, CliError> {
    match command {
        Command::TikhonovPath { common, eps_schedule } => {
            let problem = load_problem(&common.problem)?;
            let schedule = eps_schedule.clone().unwrap_or_else(default_schedule);
            check_schedule(&schedule).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(path_experiment(&problem, &schedule, common.seed)?)
        }
        Command::Solve {
            method,
            common,
            gamma,
            iters,
            tol,
            x0,
            eps,
            lipschitz,
        } => {
            positive("gamma", *gamma)?;
            positive("eps", *eps)?;
            if let Some(t) = tol {
                positive("tol", *t)?;
            }
            if let Some(l) = lipschitz {
                positive("lipschitz", *l)?;
            }
            let problem = load_problem(&common.problem)?;
            let cfg = SolveConfig {
                method: *method,
                gamma: *gamma,
                iters: *iters,
                tol: *tol,
                x0: x0.clone().map(Vector::new),
                eps: *eps,
                lipschitz: *lipschitz,
                seed: common.seed,
            };
            Ok(solve_experiment(&problem, &cfg)?)
        }
        Command::Tradeoff {
            common,
            eps,
            iters,
            x0,
            lipschitz,
        } => {
            if !(*eps >= 0.0) || !eps.is_finite() {
                return Err(CliError::Usage(format!("eps must be non-negative, got {eps}")));
            }
            if let Some(l) = lipschitz {
                positive("lipschitz", *l)?;
            }
            let problem = load_problem(&common.problem)?;
            Ok(tradeoff_experiment(
                &problem,
                *eps,
                *iters,
                x0.clone().map(Vector::new),
                *lipschitz,
                common.seed,
            )?)
        }
        Command::Probe {
            common,
            samples,
            tightness,
            sigma,
            modulus_scale,
        } => {
            positive("sigma", *sigma)?;
            positive("modulus-scale", *modulus_scale)?;
            if *samples == 0 {
                return Err(CliError::Usage("samples must be positive".into()));
            }
            let problem = load_problem(&common.problem)?;
            let cfg = ProbeConfig {
                samples: *samples,
                tightness: *tightness,
                sigma: *sigma,
                modulus_scale: *modulus_scale,
                seed: common.seed,
            };
            Ok(probe_experiment(&problem, &cfg)?)
        }
        Command::ReproduceExample1 { seed, .. } => Ok(reproduce_example1(*seed)?),
    }
}

fn positive(name: &str, v: f64) -> std::result::Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.report.summary());
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn experiment_id(command: &str, problem: &ProblemFile) -> String {
    format!("{command}/{}", problem.display_name())
}

/// A certificate for `A⁻¹` at zero: the problem's modulus if given,
/// otherwise the spectral modulus of an affine operator.
pub fn certificate(
    problem: &ProblemFile,
    op: &OperatorSpec,
    inner: &InnerSolveConfig,
) -> Result<Option<RContinuityCertificate>> {
    let rho = match (&problem.metadata.modulus, op) {
        (Some(spec), _) => Some((spec.modulus()?, spec.sigma())),
        (None, OperatorSpec::AffineSymmetric(a)) => match spectral_modulus(a.matrix()) {
            Ok(rho) => Some((rho, f64::INFINITY)),
            Err(Error::NoPositiveSpectrum { .. }) => None,
            Err(e) => return Err(e),
        },
        _ => None,
    };
    let Some((rho, sigma)) = rho else {
        return Ok(None);
    };
    let a = least_norm_solution(op, inner)?.x.norm();
    Ok(Some(RContinuityCertificate::new(sigma, a, rho, false)?))
}

/// `1/k` for PSD matrices, `‖B‖/k₂` otherwise.
fn spectral_modulus(b: &crate::linalg::SymmetricMatrix) -> Result<ModulusFunction> {
    match modulus_affine_psd(b) {
        Err(Error::InvalidArgument(_)) => modulus_affine_symmetric(b),
        other => other,
    }
}

fn note_certificate(report: &mut Report, cert: Option<&RContinuityCertificate>) {
    match cert {
        Some(c) => report.note(format!(
            "modulus: rho(s) = {:.6e} * s^{} ({:?}), sigma = {:e}, a = {:.6e}",
            c.rho.c, c.rho.alpha, c.rho.provenance, c.sigma, c.a
        )),
        None => report.note("modulus: none available, bound checks disabled"),
    }
}

fn within(measured: f64, bound: f64) -> bool {
    measured <= bound * (1.0 + SERIES_REL_TOL) + SERIES_ABS_TOL
}

pub fn path_experiment(problem: &ProblemFile, schedule: &[f64], seed: u64) -> Result<Report> {
    let instance = problem.build()?;
    let op = instance.operator()?;
    let inner = InnerSolveConfig::default();
    let cert = certificate(problem, &op, &inner)?;
    let points = problem.solution_points();
    let opts = PathOptions {
        cert,
        reference: points.as_ref().map(|p| p as &dyn DistanceOracle),
        optimal_value: problem.metadata.optimal_value,
        inner,
    };
    let path = tikhonov_path(&op, schedule, &opts)?;
    let mut report = Report::new(experiment_id("tikhonov-path", problem), seed);
    note_certificate(&mut report, cert.as_ref());
    path_rows(&mut report, &path);
    Ok(report)
}

fn path_rows(report: &mut Report, path: &PathReport) {
    let failed = |eps: f64, check: PathCheck| path.violations.iter().any(|v| v.eps == eps && v.check == check);
    let exact = path.x_tilde.as_ref().filter(|_| !path.x_tilde_approximate);
    if let Some(x) = &path.x_tilde {
        report.vector("least_norm", 0, "x_tilde", x);
        report.value("least_norm", 0, "norm", x.norm());
        report.value("least_norm", 0, "approximate", if path.x_tilde_approximate { 1.0 } else { 0.0 });
        report.note(format!(
            "least-norm solution{}: norm {:.6e}",
            if path.x_tilde_approximate { " (approximate)" } else { "" },
            x.norm()
        ));
    }
    for (j, p) in path.points.iter().enumerate() {
        report.value("path", j, "eps", p.eps);
        let norm_ok = !failed(p.eps, PathCheck::NormAboveLeastNorm) && !failed(p.eps, PathCheck::NonMonotoneNorm);
        report.checked("path", j, "norm_x_eps", p.norm_x_eps, exact.map(|x| x.norm()), norm_ok);
        report.vector("path", j, "x_eps", &p.x_eps);
        if let Some(d) = p.dist_to_s {
            match p.dist_bound {
                Some(b) => report.checked("path", j, "dist_to_s", d, Some(b), !failed(p.eps, PathCheck::DistanceBound)),
                None => report.value("path", j, "dist_to_s", d),
            }
        }
        if let Some(e) = p.error_to_least_norm {
            match p.rate_bound {
                Some(b) => report.checked("path", j, "error_to_least_norm", e, Some(b), !failed(p.eps, PathCheck::RateBound)),
                None => report.value("path", j, "error_to_least_norm", e),
            }
        }
        if let Some(g) = p.measured_gap {
            match p.gap_bound {
                Some(b) => report.checked("path", j, "gap", g, Some(b), !failed(p.eps, PathCheck::GapBound)),
                None => report.value("path", j, "gap", g),
            }
        }
        if let Some(r) = p.residual {
            report.checked("path", j, "residual", r, None, !failed(p.eps, PathCheck::ResidualIdentity));
        }
    }
    let enabled = [
        (PathCheck::NormAboveLeastNorm, exact.is_some()),
        (PathCheck::NonMonotoneNorm, path.points.len() > 1),
        (
            PathCheck::DistanceBound,
            path.points.iter().any(|p| p.dist_bound.is_some() && p.dist_to_s.is_some()),
        ),
        (
            PathCheck::RateBound,
            path.points.iter().any(|p| p.rate_bound.is_some() && p.error_to_least_norm.is_some()),
        ),
        (
            PathCheck::GapBound,
            path.points.iter().any(|p| p.gap_bound.is_some() && p.measured_gap.is_some()),
        ),
        (PathCheck::ResidualIdentity, path.points.iter().any(|p| p.residual.is_some())),
    ];
    for (check, on) in enabled {
        if !on {
            continue;
        }
        let bad: Vec<_> = path.violations.iter().filter(|v| v.check == check).collect();
        let detail = match bad.first() {
            None => format!("{} points checked", path.points.len()),
            Some(v) => format!(
                "{} of {} points violate, first at eps = {:e} (measured {:e} > {:e})",
                bad.len(),
                path.points.len(),
                v.eps,
                v.measured,
                v.bound
            ),
        };
        report.check(check.name(), bad.is_empty(), detail);
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub method: Method,
    pub gamma: f64,
    pub iters: usize,
    pub tol: Option<f64>,
    pub x0: Option<Vector>,
    pub eps: f64,
    pub lipschitz: Option<f64>,
    pub seed: u64,
}

fn start_point(problem: &ProblemFile, instance: &Instance, x0: Option<Vector>) -> Result<Vector> {
    let x = x0
        .or_else(|| problem.metadata.x0.clone())
        .unwrap_or_else(|| Vector::zeros(instance.dim()));
    check_dim(instance.dim(), x.len())?;
    Ok(x)
}

/// A minimizer of `f`: the problem's, or the one nearest `y0` for quadratics.
fn minimizer(problem: &ProblemFile, f: &dyn SmoothFunction, y0: &Vector) -> Result<Option<Vector>> {
    if let Some(x) = &problem.metadata.minimizer {
        return Ok(Some(x.clone()));
    }
    match f.as_quadratic() {
        Some(q) => Ok(Some(AffineSolutionSet::new(q.matrix(), &-q.linear())?.project(y0))),
        None => Ok(None),
    }
}

pub fn trace_rows(report: &mut Report, t: &IterateTrace) {
    for (k, v) in t.objective_values.iter().enumerate() {
        report.value("trace", k, "objective", *v);
    }
    let series: [(&str, Option<&Vec<f64>>); 2] = [("gap", t.gaps.as_ref()), ("dist_to_s", t.dist_to_s.as_ref())];
    for (name, s) in series {
        for (k, v) in s.into_iter().flatten().enumerate() {
            report.value("trace", k, name, *v);
        }
    }
    let steps: [(&str, Option<&Vec<f64>>); 4] = [
        ("step_norm", Some(&t.step_norms)),
        ("residual", t.residuals.as_ref()),
        ("descent", t.descent.as_ref()),
        ("subproblem_residual", t.subproblem_residuals.as_ref()),
    ];
    for (name, s) in steps {
        for (k, v) in s.into_iter().flatten().enumerate() {
            report.value("step", k, name, *v);
        }
    }
    for (k, x) in t.iterate_indices.iter().zip(&t.iterates) {
        report.vector("iterate", *k, "x", x);
    }
}

fn note_trace(report: &mut Report, t: &IterateTrace) {
    report.note(format!(
        "solver: {}, iterations: {}, stop: {}{}",
        t.meta.solver,
        t.meta.iterations,
        t.meta.stop_reason,
        if t.is_thinned() {
            format!(", iterates thinned with stride {}", t.stride)
        } else {
            String::new()
        }
    ));
    let x = t.last_iterate();
    report.note(format!("final iterate: {:?}", x.as_slice()));
    report.note(format!("final objective: {:.16e}", t.final_objective()));
}

fn check_nonincreasing(report: &mut Report, name: &str, series: &[f64]) {
    let bad = series
        .windows(2)
        .position(|w| !(w[1] <= w[0] + SERIES_REL_TOL * w[0].abs().max(1.0)));
    match bad {
        None => report.check(name, true, format!("{} values non-increasing", series.len())),
        Some(k) => report.check(
            name,
            false,
            format!("increase at k = {k}: {:e} -> {:e}", series[k], series[k + 1]),
        ),
    }
}

fn check_envelope(report: &mut Report, name: &str, gaps: &[f64], envelope: impl Fn(usize) -> f64) {
    let bad: Vec<usize> = (0..gaps.len()).filter(|k| !within(gaps[*k], envelope(*k))).collect();
    match bad.first() {
        None => report.check(name, true, format!("gap within envelope at all {} iterates", gaps.len())),
        Some(&k) => report.check(
            name,
            false,
            format!(
                "{} iterates above envelope, first k = {k} ({:e} > {:e})",
                bad.len(),
                gaps[k],
                envelope(k)
            ),
        ),
    }
}

pub fn solve_experiment(problem: &ProblemFile, cfg: &SolveConfig) -> Result<Report> {
    let instance = problem.build()?;
    let x0 = start_point(problem, &instance, cfg.x0.clone())?;
    let name = match cfg.method {
        Method::Ppa => "solve-ppa",
        Method::Agd => "solve-agd",
        Method::AgdStrong => "solve-agd-strong",
        Method::FbDc => "solve-fb-dc",
        Method::Dca => "solve-dca",
    };
    let mut report = Report::new(experiment_id(name, problem), cfg.seed);
    let points = problem.solution_points();
    let mut opts = RunOptions::iterations(cfg.iters);
    opts.stop_tol = cfg.tol;
    opts.distance = points.as_ref().map(|p| p as &dyn DistanceOracle);
    opts.optimal_value = problem.metadata.optimal_value;
    match cfg.method {
        Method::Ppa => {
            let op = instance.operator()?;
            let affine_set = match &op {
                OperatorSpec::AffineSymmetric(a) => Some(AffineSolutionSet::new(a.matrix(), a.rhs())?),
                _ => None,
            };
            if let Some(s) = &affine_set {
                opts.reference = Some(s.least_norm().clone());
                if opts.distance.is_none() {
                    opts.distance = Some(s);
                }
            }
            let t = proximal_point(&op, cfg.gamma, &x0, &opts)?;
            note_trace(&mut report, &t);
            trace_rows(&mut report, &t);
            check_nonincreasing(&mut report, "objective_nonincreasing", &t.objective_values);
            check_nonincreasing(&mut report, "step_nonincreasing", &t.step_norms);
        }
        Method::Agd | Method::AgdStrong => {
            let f = instance.smooth_objective()?;
            let l = cfg
                .lipschitz
                .or(problem.metadata.lipschitz)
                .unwrap_or_else(|| f.lipschitz());
            if cfg.method == Method::Agd {
                let x_star = minimizer(problem, f.as_ref(), &x0)?;
                if let Some(x) = &x_star {
                    opts.reference = Some(x.clone());
                }
                let t = nesterov_agd(f.as_ref(), l, &x0, &opts)?;
                note_trace(&mut report, &t);
                trace_rows(&mut report, &t);
                match (&x_star, &t.gaps) {
                    (Some(x), Some(gaps)) => {
                        let d2 = x0.distance(x).powi(2);
                        check_envelope(&mut report, "agd_envelope", gaps, |k| agd_envelope(l, d2, k));
                    }
                    _ => report.note("no minimizer known: envelope check disabled"),
                }
            } else {
                let inner = InnerSolveConfig::default();
                let x_eps = regularized_minimizer(&f, cfg.eps, &inner)?;
                let g = Regularized::new(f.clone(), cfg.eps);
                opts.reference = Some(x_eps.clone());
                opts.optimal_value = None;
                let t = nesterov_strongly_convex(&g, l + cfg.eps, cfg.eps, &x0, &opts)?;
                note_trace(&mut report, &t);
                trace_rows(&mut report, &t);
                report.vector("regularized", 0, "x_eps", &x_eps);
                let d2 = x0.distance(&x_eps).powi(2);
                let gaps = t.gaps.as_ref().expect("reference set");
                check_envelope(&mut report, "strongly_convex_envelope", gaps, |k| {
                    strongly_convex_envelope(l, cfg.eps, d2, k)
                });
            }
        }
        Method::FbDc | Method::Dca => {
            let (g, h) = instance.dc_pair()?;
            let t = if cfg.method == Method::FbDc {
                forward_backward_dc(g, h.as_ref(), cfg.gamma, &x0, &opts)?
            } else {
                dca(g, h.as_ref(), &x0, &opts)?
            };
            note_trace(&mut report, &t);
            trace_rows(&mut report, &t);
            dc_checks(&mut report, &t, cfg.gamma, problem.metadata.optimal_value, cfg.tol.is_some());
        }
    }
    Ok(report)
}

/// Descent, summability, convergence and final-distance checks for DC runs.
fn dc_checks(report: &mut Report, t: &IterateTrace, gamma: f64, lower: Option<f64>, expect_convergence: bool) {
    if let Some(descent) = &t.descent {
        let bad: Vec<usize> = (0..descent.len()).filter(|k| !(descent[*k] <= DESCENT_TOL)).collect();
        report.check(
            "descent",
            bad.is_empty(),
            match bad.first() {
                None => format!("all {} steps satisfy the descent inequality", descent.len()),
                Some(&k) => format!("{} steps violate, first k = {k} (excess {:e})", bad.len(), descent[k]),
            },
        );
        if let Some(f_low) = lower {
            let sum = t.squared_step_sum();
            let bound = gamma * (t.objective_values[0] - f_low) + SUMMABILITY_TOL;
            report.check("summability", sum <= bound, format!("sum of squared steps {sum:e}, bound {bound:e}"));
        }
    } else {
        check_nonincreasing(report, "objective_nonincreasing", &t.objective_values);
    }
    if expect_convergence {
        report.check(
            "converged",
            t.meta.stop_reason == StopReason::Converged,
            format!("stopped after {} iterations ({})", t.meta.iterations, t.meta.stop_reason),
        );
        if let Some(d) = t.dist_to_s.as_ref().and_then(|d| d.last()) {
            report.check(
                "critical_distance",
                *d <= CRITICAL_DIST_TOL,
                format!("final distance to the critical set {d:e}"),
            );
        }
    }
}

pub fn tradeoff_experiment(
    problem: &ProblemFile,
    eps: f64,
    budget: usize,
    x0: Option<Vector>,
    lipschitz: Option<f64>,
    seed: u64,
) -> Result<Report> {
    let instance = problem.build()?;
    let f: Arc<dyn SmoothFunction> = instance.smooth_objective()?;
    let op = instance.operator()?;
    let inner = InnerSolveConfig::default();
    let cert = certificate(problem, &op, &inner)?;
    let y0 = start_point(problem, &instance, x0)?;
    let l = lipschitz.or(problem.metadata.lipschitz).unwrap_or_else(|| f.lipschitz());
    let cfg = TradeoffConfig {
        lipschitz: l,
        eps,
        y0,
        budget,
        minimizer: problem.metadata.minimizer.clone(),
        inner,
    };
    let r = tradeoff_analysis(f, cert.as_ref(), &cfg)?;
    let mut report = Report::new(experiment_id("tradeoff", problem), seed);
    note_certificate(&mut report, cert.as_ref());
    let s = "tradeoff";
    report.value(s, 0, "eps", r.eps);
    report.value(s, 0, "budget", r.budget as f64);
    report.value(s, 0, "lipschitz", l);
    if let Some(w) = &r.w_terms {
        report.value(s, 0, "w_gap", w.gap);
        report.value(s, 0, "w_quadratic", w.quadratic);
        report.value(s, 0, "w_linear", w.linear);
    }
    report.value(s, 0, "r_eps", r.r_eps);
    if let Some(w) = r.w_k {
        let ok = within(w + r.r_eps, r.predictive_bound);
        report.checked(s, 0, "w_k_plus_r_eps", w + r.r_eps, Some(r.predictive_bound), ok);
        report.check(
            "measured_within_predictive",
            ok,
            format!("W_k + R = {:e}, predictive bound {:e}", w + r.r_eps, r.predictive_bound),
        );
    }
    report.value(s, 0, "predictive_bound", r.predictive_bound);
    report.value(s, 0, "direct_bound", r.direct_bound);
    if let Some(k) = r.crossing_iteration {
        report.value(s, 0, "crossing_iteration", k as f64);
    }
    report.value(
        s,
        0,
        "recommend_regularize",
        if r.recommendation == crate::solvers::Recommendation::Regularize { 1.0 } else { 0.0 },
    );
    for (k, v) in &r.regularized_bound_curve {
        report.value("curve", *k, "strongly_convex_envelope", *v);
    }
    report.note("W_k is measured from a run, not predictive");
    report.note(format!(
        "recommendation: {} (regularized {:e} vs direct {:e})",
        r.recommendation,
        r.w_k.map_or(r.predictive_bound, |w| w + r.r_eps),
        r.direct_bound
    ));
    if let Some(k) = r.crossing_iteration {
        report.note(format!("direct envelope drops below R(eps) from k = {k}"));
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub samples: usize,
    pub tightness: usize,
    pub sigma: f64,
    pub modulus_scale: f64,
    pub seed: u64,
}

pub fn probe_experiment(problem: &ProblemFile, cfg: &ProbeConfig) -> Result<Report> {
    let instance = problem.build()?;
    let op = instance.operator()?;
    let inner = InnerSolveConfig::default();
    let base = certificate(problem, &op, &inner)?
        .ok_or_else(|| Error::invalid("probe needs a modulus: add metadata.modulus to the problem"))?;
    let rho = ModulusFunction::new(base.rho.c * cfg.modulus_scale, base.rho.alpha, base.rho.provenance)?;
    let cert = RContinuityCertificate { rho, ..base };
    let mut rng = SeededRng::new(cfg.seed);
    let (samples, reference): (Vec<ProbeSample>, Box<dyn DistanceOracle>) = match &instance {
        Instance::Affine(a) => {
            let mut s = affine_preimage_samples(a, cfg.samples, cfg.sigma, &mut rng)?;
            if cfg.tightness > 0 {
                s.extend(affine_tightness_samples(a, cfg.tightness, cfg.sigma)?);
            }
            (s, Box::new(AffineSolutionSet::new(a.matrix(), a.rhs())?))
        }
        Instance::Sign => (
            sign_preimage_samples(cfg.samples, cfg.sigma, &mut rng),
            Box::new(PointSet::new(vec![Vector::zeros(1)])),
        ),
        _ => {
            return Err(Error::Unsupported(
                "probe samples preimages of quadratic and sign problems only".into(),
            ))
        }
    };
    let probe = rcontinuity_probe(&samples, reference.as_ref(), &cert);
    let mut report = Report::new(experiment_id("probe", problem), cfg.seed);
    note_certificate(&mut report, Some(&cert));
    let bad: Vec<usize> = probe.violations.iter().map(|v| v.index).collect();
    for o in &probe.outcomes {
        report.value("probe", o.index, "residual_norm", o.residual_norm);
        report.checked("probe", o.index, "distance", o.distance, Some(o.bound), !bad.contains(&o.index));
    }
    if !probe.skipped.is_empty() {
        report.note(format!("{} samples outside sigma skipped", probe.skipped.len()));
    }
    report.check(
        "rcontinuity",
        probe.is_clean(),
        format!(
            "{} violations over {} samples, max distance/bound ratio {:.6}",
            probe.violations.len(),
            probe.outcomes.len(),
            probe.max_ratio
        ),
    );
    Ok(report)
}

/// Componentwise tolerance on `x_ε` and the least-norm solution.
const X_EPS_TOL: f64 = 1e-8;
const LEAST_NORM_TOL: f64 = 1e-9;
/// Accepted interval for `f(x_ε) − f*` at `ε = 1e−5`.
pub const EXAMPLE1_GAP_INTERVAL: (f64, f64) = (2.70e-12, 2.76e-12);

/// The 3×3 singular quadratic: regularized solve, least-norm solution,
/// accelerated gradient comparison and bound checks.
pub fn reproduce_example1(seed: u64) -> Result<Report> {
    let mut report = Report::new("reproduce-example1", seed);
    let op = example1_operator();
    let affine = example1_affine();
    let b = affine.matrix();
    let eps = example1::EPS;
    let inner = InnerSolveConfig::default();

    let x_tilde = least_norm_solution(&op, &inner)?.x;
    let target = Vector::from(example1::LEAST_NORM);
    let ln_err = (&x_tilde - &target).norm_inf();
    for i in 0..3 {
        report.with_bound("least_norm", i, "x_tilde", x_tilde[i], target[i]);
    }
    report.check(
        "least_norm",
        ln_err <= LEAST_NORM_TOL,
        format!("max deviation from (1, 2, 3) is {ln_err:e}"),
    );
    let kernel = Vector::from([1.0, 1.0, -1.0]);
    let ortho = x_tilde.dot(&kernel) / kernel.norm();
    report.value("least_norm", 0, "kernel_inner_product", ortho);
    report.check(
        "kernel_orthogonality",
        ortho.abs() <= LEAST_NORM_TOL,
        format!("<x_tilde, (1,1,-1)/sqrt 3> = {ortho:e}"),
    );

    let x_eps = crate::tikhonov::tikhonov_solve(&op, eps, &inner)?;
    let mut x_err = 0.0_f64;
    for i in 0..3 {
        let expected = example1::LEAST_NORM[i] + eps * example1::PERTURBATION[i];
        x_err = x_err.max((x_eps[i] - expected).abs());
        report.with_bound("regularized", i, "x_eps", x_eps[i], expected);
    }
    report.check(
        "x_eps",
        x_err <= X_EPS_TOL,
        format!("max deviation from the reference x_eps is {x_err:e}"),
    );
    let f = example1_objective();
    let gap = f.gap(&x_eps, &x_tilde);
    let (lo, hi) = EXAMPLE1_GAP_INTERVAL;
    report.with_bound("regularized", 0, "gap", gap, example1::GAP);
    report.check(
        "gap_interval",
        (lo..=hi).contains(&gap),
        format!("f(x_eps) - f* = {gap:.10e}, accepted interval [{lo:e}, {hi:e}]"),
    );
    report.note(format!(
        "f(x_eps) - f* is evaluated as (1/2)<B d, d> with d = x_eps - x_tilde; \
         reference value {:e}",
        example1::GAP
    ));

    let rho = modulus_affine_psd(b)?;
    let cert = RContinuityCertificate::global(x_tilde.norm(), rho)?;
    let bounds = distance_and_rate_bounds(&cert, eps)?;
    let set = AffineSolutionSet::new(b, affine.rhs())?;
    let dist = set.distance(&x_eps);
    let err = x_eps.distance(&x_tilde);
    let g_bound = gap_bound(&cert, eps)?;
    report.checked("bounds", 0, "dist_to_s", dist, Some(bounds.dist_bound), within(dist, bounds.dist_bound));
    report.checked("bounds", 0, "error_to_least_norm", err, Some(bounds.rate_bound), within(err, bounds.rate_bound));
    report.checked("bounds", 0, "gap", gap, Some(g_bound), within(gap, g_bound));
    report.check(
        "distance_bound",
        within(dist, bounds.dist_bound),
        format!("{dist:e} <= {:e}", bounds.dist_bound),
    );
    report.check("rate_bound", within(err, bounds.rate_bound), format!("{err:e} <= {:e}", bounds.rate_bound));
    report.check("gap_bound", within(gap, g_bound), format!("{gap:e} <= {g_bound:e}"));

    let y0 = Vector::from(example1::START);
    let x_star = set.project(&y0);
    report.vector("nesterov", 0, "x_star", &x_star);
    let l = example1::LIPSCHITZ_BOUND;
    let opts = RunOptions::iterations(example1::NESTEROV_ITERS).with_reference(x_star.clone());
    let t = nesterov_agd(&f, l, &y0, &opts)?;
    let gaps = t.gaps.as_ref().expect("reference set");
    let d2 = y0.distance(&x_star).powi(2);
    let mut k = 1;
    while k <= example1::NESTEROV_ITERS {
        report.with_bound("nesterov", k, "gap", gaps[k], agd_envelope(l, d2, k));
        k *= 10;
    }
    let last = *gaps.last().expect("non-empty trace");
    let ratio = last / example1::NESTEROV_GAP;
    report.with_bound("nesterov", example1::NESTEROV_ITERS, "final_gap", last, example1::NESTEROV_GAP);
    report.vector("nesterov", example1::NESTEROV_ITERS, "x_k", t.last_iterate());
    report.check(
        "nesterov_gap_factor",
        (0.1..=10.0).contains(&ratio),
        format!("final gap {last:.6e}, reference {:e}, ratio {ratio:.4}", example1::NESTEROV_GAP),
    );
    check_envelope(&mut report, "nesterov_envelope", gaps, |k| agd_envelope(l, d2, k));
    report.note(format!("x_eps = {:?}", x_eps.as_slice()));
    report.note(format!("x_k after {} iterations = {:?}", example1::NESTEROV_ITERS, t.last_iterate().as_slice()));
    Ok(report)
}
