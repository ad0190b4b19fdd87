//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. The process exits nonzero when a
//! criterion fails, except for the documented deviation in [`KNOWN_DEVIATIONS`].
//! Set `MONOREG_ACCEPTANCE_OUT=<dir>` to keep the per-criterion CSV reports.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use monoreg::cli::{emit_report, load_problem, Instance, Report};
use monoreg::fixtures::{example1, example1_matrix, example1_objective, example1_operator};
use monoreg::linalg::{eigendecompose, min_norm_solve, default_zero_threshold, AffineSolutionSet, SymmetricMatrix, Vector, DEFAULT_EIGEN_TOL};
use monoreg::operators::{
    affine_preimage_samples, affine_tightness_samples, modulus_affine_psd, modulus_affine_symmetric,
    rcontinuity_probe, AffineOperator, CompositeOperator, ConstraintSet, DistanceOracle, InnerSolveConfig,
    ModulusFunction, OperatorSpec, PointSet, Quadratic, RContinuityCertificate, SmoothFunction,
};
use monoreg::rng::SeededRng;
use monoreg::solvers::{agd_envelope, dca, fb_equivalent_pair, forward_backward_dc, nesterov_agd, RunOptions, StopReason};
use monoreg::tikhonov::{distance_and_rate_bounds, gap_bound, lipschitz_bounds, tikhonov_path, tikhonov_solve, PathOptions};

const SEED: u64 = 20_240_601;

/// Criterion 1's gap interval cannot be met by an accurate solve: the exact
/// value of `f(x_ε) − f*` is 2.7776975e−12, outside [2.70e−12, 2.76e−12].
/// The criterion still prints FAIL; only this sub-check is tolerated.
const KNOWN_DEVIATIONS: &[(usize, &str)] = &[(1, "gap_interval")];

struct Outcome {
    pass: bool,
    /// Names of the failed sub-checks.
    failed: Vec<String>,
    detail: String,
    report: Report,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Outcome {
            pass: true,
            failed: Vec::new(),
            detail: String::new(),
            report,
        }
    }

    fn require(&mut self, name: &str, ok: bool, detail: String) {
        if !ok {
            self.pass = false;
            self.failed.push(name.to_string());
        }
        self.report.check(name, ok, detail.clone());
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&format!("{name}: {detail}"));
    }
}

fn within(measured: f64, bound: f64, abs: f64) -> bool {
    measured <= bound * (1.0 + 1e-9) + abs
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------------------
// Instances with known spectral structure

/// `B = Σ λ_i v_i v_iᵀ` with a nontrivial kernel, `C = Bx̃` and `x̃ ∈ rge B`.
struct KnownInstance {
    b: SymmetricMatrix,
    c: Vector,
    x_tilde: Vector,
    range: Vec<Vector>,
    /// Nonzero eigenvalues, paired with `range`.
    lambdas: Vec<f64>,
}

impl KnownInstance {
    fn generate(rng: &mut SeededRng, indefinite: bool) -> Self {
        let n = 2 + rng.index(9);
        let r = 1 + rng.index(n - 1);
        let basis = rng.orthonormal_basis(n);
        let mut lambdas: Vec<f64> = (0..r).map(|_| 10f64.powf(rng.uniform(-1.0, 1.0))).collect();
        if indefinite {
            for l in lambdas.iter_mut() {
                if rng.coin() {
                    *l = -*l;
                }
            }
            lambdas[0] = -lambdas[0].abs();
        }
        let mut weights = lambdas.clone();
        weights.resize(n, 0.0);
        let b = SymmetricMatrix::from_spectrum(&weights, &basis).unwrap();
        let mut x_tilde = Vector::zeros(n);
        for v in &basis[..r] {
            x_tilde.axpy(rng.normal(), v);
        }
        let c = b.mul_vec(&x_tilde);
        KnownInstance {
            b,
            c,
            x_tilde,
            range: basis[..r].to_vec(),
            lambdas,
        }
    }

    fn least_positive(&self) -> f64 {
        self.lambdas.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min)
    }

    fn affine(&self) -> AffineOperator {
        AffineOperator::new(self.b.clone(), self.c.clone()).unwrap()
    }

    fn oracle(&self) -> RangeDistance {
        RangeDistance {
            range: self.range.clone(),
            anchor: self.x_tilde.clone(),
        }
    }
}

/// `d(x, x̃ + ker B) = ‖P_rge(x − x̃)‖` from the construction basis.
#[derive(Debug)]
struct RangeDistance {
    range: Vec<Vector>,
    anchor: Vector,
}

impl DistanceOracle for RangeDistance {
    fn distance(&self, x: &Vector) -> f64 {
        let d = x - &self.anchor;
        self.range.iter().map(|v| v.dot(&d).powi(2)).sum::<f64>().sqrt()
    }
}

fn geometric_schedule(rng: &mut SeededRng) -> Vec<f64> {
    let start = 10f64.powf(rng.uniform(-1.0, 1.0));
    let ratio = rng.uniform(0.1, 0.5);
    (0..8).map(|j| start * ratio.powi(j)).collect()
}

// ---------------------------------------------------------------------------
// Criteria

fn criterion1(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-1", seed));
    let start = Instant::now();
    let x_eps = tikhonov_solve(&example1_operator(), example1::EPS, &InnerSolveConfig::default()).unwrap();
    let x_tilde = Vector::from(example1::LEAST_NORM);
    let mut err = 0.0_f64;
    for i in 0..3 {
        let expected = x_tilde[i] + example1::EPS * example1::PERTURBATION[i];
        err = err.max((x_eps[i] - expected).abs());
        out.report.with_bound("x_eps", i, "value", x_eps[i], expected);
    }
    // (1,2,3) solves Bx = C exactly, so f(x̃ + d) − f(x̃) = ½⟨Bd, d⟩.
    let d = &x_eps - &x_tilde;
    let gap = 0.5 * example1_matrix().quadratic_form(&d);
    let elapsed = start.elapsed().as_secs_f64();
    out.report.with_bound("gap", 0, "value", gap, example1::GAP);
    out.require("x_eps", err <= 1e-8, format!("max error {err:.3e} <= 1e-8"));
    out.require(
        "gap_interval",
        (2.70e-12..=2.76e-12).contains(&gap),
        format!("gap {gap:.6e} in [2.70e-12, 2.76e-12]"),
    );
    out.require("runtime", elapsed < 1.0, format!("{elapsed:.3} s < 1 s"));
    out
}

fn criterion2(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-2", seed));
    let b = example1_matrix();
    let c = Vector::from([318.0, 669.0, 987.0]);
    let x = min_norm_solve(&b, &c, default_zero_threshold(&b)).unwrap();
    let err = (&x - &Vector::from(example1::LEAST_NORM)).norm_inf();
    let kernel = Vector::from([1.0, 1.0, -1.0]);
    let ortho = x.dot(&kernel) / kernel.norm();
    out.report.vector("least_norm", 0, "x", &x);
    out.report.value("least_norm", 0, "kernel_inner_product", ortho);
    out.require("least_norm", err <= 1e-9, format!("error {err:.3e} <= 1e-9"));
    out.require("orthogonality", ortho.abs() <= 1e-9, format!("|<x, k>| {:.3e} <= 1e-9", ortho.abs()));
    out
}

fn criterion3(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-3", seed));
    let start = Instant::now();
    let f = example1_objective();
    let y0 = Vector::from(example1::START);
    let set = AffineSolutionSet::new(&example1_matrix(), &Vector::from([318.0, 669.0, 987.0])).unwrap();
    let x_star = set.project(&y0);
    let l = example1::LIPSCHITZ_BOUND;
    let opts = RunOptions::iterations(example1::NESTEROV_ITERS).with_reference(x_star.clone());
    let t = nesterov_agd(&f, l, &y0, &opts).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let gaps = t.gaps.as_ref().unwrap();
    let d2 = y0.distance(&x_star).powi(2);
    let last = *gaps.last().unwrap();
    let ratio = last / example1::NESTEROV_GAP;
    let above: Vec<usize> = (0..gaps.len()).filter(|k| !within(gaps[*k], agd_envelope(l, d2, *k), 0.0)).collect();
    out.report.vector("x_star", 0, "value", &x_star);
    let mut k = 1;
    while k <= example1::NESTEROV_ITERS {
        out.report.with_bound("gap", k, "value", gaps[k], agd_envelope(l, d2, k));
        k *= 10;
    }
    let x_star_err = (&x_star - &Vector::from([7.0 / 3.0, 10.0 / 3.0, 5.0 / 3.0])).norm_inf();
    out.require("x_star", x_star_err <= 1e-9, format!("x* error {x_star_err:.2e}"));
    out.require(
        "gap_factor",
        (0.1..=10.0).contains(&ratio),
        format!("final gap {last:.4e}, ratio to 9.9135e-10 is {ratio:.3}"),
    );
    out.require("envelope", above.is_empty(), format!("{} of {} iterates above envelope", above.len(), gaps.len()));
    out.require("runtime", elapsed < 10.0, format!("{elapsed:.3} s < 10 s"));
    out
}

/// Criteria 4 and 5 share their instances.
fn criteria4_5(seed: u64) -> (Outcome, Outcome) {
    let mut c4 = Outcome::new(Report::new("acceptance-4", seed));
    let mut c5 = Outcome::new(Report::new("acceptance-5", seed));
    let start = Instant::now();
    let mut rng = SeededRng::new(seed);
    let (mut norm_bad, mut mono_bad, mut dist_bad, mut rate_bad, mut gap_bad, mut triple_bad) = (0, 0, 0, 0, 0, 0);
    let mut lib_violations = 0;
    let mut points = 0;
    for inst_idx in 0..50 {
        let mut irng = rng.fork();
        let inst = KnownInstance::generate(&mut irng, false);
        let schedule = geometric_schedule(&mut irng);
        let op = OperatorSpec::AffineSymmetric(inst.affine());
        let a = inst.x_tilde.norm();
        let k = inst.least_positive();
        let cert = RContinuityCertificate::global(a, modulus_affine_psd(&inst.b).unwrap()).unwrap();
        let oracle = inst.oracle();
        let opts = PathOptions {
            cert: Some(cert),
            reference: Some(&oracle),
            ..Default::default()
        };
        let path = tikhonov_path(&op, &schedule, &opts).unwrap();
        lib_violations += path.violations.len();
        let mut prev_norm: Option<f64> = None;
        for (j, p) in path.points.iter().enumerate() {
            points += 1;
            let idx = inst_idx * 8 + j;
            let eps = p.eps;
            let norm = p.x_eps.norm();
            let dist = oracle.distance(&p.x_eps);
            let err = p.x_eps.distance(&inst.x_tilde);
            let rho = eps * a / k;
            let dist_bound = rho;
            let rate_bound = rho + (rho * rho + 2.0 * rho * a).sqrt();
            let d = &p.x_eps - &inst.x_tilde;
            let gap = 0.5 * inst.b.quadratic_form(&d);
            let g_bound = a * a * eps * eps / k;

            if !(norm <= a + 1e-9) {
                norm_bad += 1;
            }
            if let Some(prev) = prev_norm {
                if !(prev <= norm + 1e-10) {
                    mono_bad += 1;
                }
            }
            prev_norm = Some(norm);
            if !within(dist, dist_bound, 1e-14) {
                dist_bad += 1;
            }
            if !within(err, rate_bound, 1e-14) {
                rate_bad += 1;
            }
            if !within(gap, g_bound, 1e-18) {
                gap_bad += 1;
            }

            // the Lipschitz triple against the general formulas at α = 1
            let c = cert.rho.c;
            let lb = lipschitz_bounds(c, a, eps).unwrap();
            let db = distance_and_rate_bounds(&cert, eps).unwrap();
            let gb = gap_bound(&cert, eps).unwrap();
            let worst = [
                rel_diff(lb.iterate_bound, db.dist_bound),
                rel_diff(lb.least_norm_bound, db.rate_bound),
                rel_diff(lb.gap_bound, gb),
                rel_diff(lb.iterate_bound, c * a * eps),
                rel_diff(lb.least_norm_bound, a * (c * eps + (c * c * eps * eps + 2.0 * c * eps).sqrt())),
                rel_diff(lb.gap_bound, c * a * a * eps * eps),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            if worst > 1e-12 {
                triple_bad += 1;
            }

            c4.report.value("path", idx, "eps", eps);
            c4.report.with_bound("path", idx, "norm_x_eps", norm, a);
            c4.report.with_bound("path", idx, "dist_to_s", dist, dist_bound);
            c4.report.with_bound("path", idx, "error_to_least_norm", err, rate_bound);
            c5.report.with_bound("gap", idx, "value", gap, g_bound);
            c5.report.value("triple", idx, "max_rel_diff", worst);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    c4.require("norm", norm_bad == 0, format!("{norm_bad}/{points} violations"));
    c4.require("monotone", mono_bad == 0, format!("{mono_bad} violations"));
    c4.require("distance", dist_bad == 0, format!("{dist_bad} violations"));
    c4.require("rate", rate_bad == 0, format!("{rate_bad} violations"));
    c4.require("library_checks", lib_violations == 0, format!("{lib_violations} reported by the path"));
    c4.require("runtime", elapsed < 30.0, format!("{elapsed:.2} s < 30 s"));
    c5.require("gap", gap_bad == 0, format!("{gap_bad}/{points} violations"));
    c5.require("triple", triple_bad == 0, format!("{triple_bad} disagreements above 1e-12"));
    (c4, c5)
}

fn criterion6(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-6", seed));
    let mut rng = SeededRng::new(seed.wrapping_add(6));
    let (mut violations, mut untight, mut samples) = (0, 0, 0);
    for i in 0..20 {
        let mut irng = rng.fork();
        let indefinite = i % 2 == 1;
        let inst = KnownInstance::generate(&mut irng, indefinite);
        let op = inst.affine();
        let rho = if indefinite {
            modulus_affine_symmetric(&inst.b).unwrap()
        } else {
            modulus_affine_psd(&inst.b).unwrap()
        };
        let cert = RContinuityCertificate::global(inst.x_tilde.norm(), rho).unwrap();
        let oracle = inst.oracle();
        let pairs = affine_preimage_samples(&op, 100, 1.0, &mut irng).unwrap();
        let report = rcontinuity_probe(&pairs, &oracle, &cert);
        samples += report.outcomes.len();
        violations += report.violations.len();
        out.report.value("probe", i, "samples", report.outcomes.len() as f64);
        out.report.with_bound("probe", i, "max_ratio", report.max_ratio, 1.0);
        if !indefinite {
            let halved = ModulusFunction::lipschitz(rho.c / 2.0, rho.provenance).unwrap();
            let weak = RContinuityCertificate::global(cert.a, halved).unwrap();
            let tight = affine_tightness_samples(&op, 10, 1.0).unwrap();
            let r = rcontinuity_probe(&tight, &oracle, &weak);
            out.report.value("tightness", i, "violations", r.violations.len() as f64);
            if r.violations.is_empty() {
                untight += 1;
            }
        }
    }
    out.require(
        "certified",
        violations == 0 && samples == 2000,
        format!("{violations} violations over {samples} samples"),
    );
    out.require("tightness", untight == 0, format!("{untight} of 10 halved moduli not refuted"));
    out
}

/// `g = ½⟨Qx,x⟩ + I_box`, `h = ½⟨Px,x⟩` with every critical point enumerated.
struct BoxDc {
    g: OperatorSpec,
    h: Arc<dyn SmoothFunction>,
    x0: Vector,
    critical: Vec<Vector>,
    f_low: f64,
}

/// Solves `M x = r` by Gaussian elimination with partial pivoting; `None`
/// when a pivot falls below `tol`.
fn gauss_solve(mut m: Vec<Vec<f64>>, mut r: Vec<f64>, tol: f64) -> Option<Vec<f64>> {
    let n = r.len();
    for col in 0..n {
        let p = (col..n).max_by(|a, b| m[*a][col].abs().total_cmp(&m[*b][col].abs()))?;
        if m[p][col].abs() < tol {
            return None;
        }
        m.swap(col, p);
        r.swap(col, p);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (r[i] - s) / m[i][i];
    }
    Some(x)
}

fn random_psd(rng: &mut SeededRng, n: usize) -> SymmetricMatrix {
    let basis = rng.orthonormal_basis(n);
    let w: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, 2.0)).collect();
    SymmetricMatrix::from_spectrum(&w, &basis).unwrap()
}

impl BoxDc {
    /// `None` when some principal submatrix of `Q − P` is nearly singular,
    /// so the critical set might not be finite.
    fn generate(rng: &mut SeededRng) -> Option<Self> {
        let n = 1 + rng.index(5);
        let q = random_psd(rng, n);
        let p = random_psd(rng, n);
        let lower: Vec<f64> = (0..n).map(|_| rng.uniform(-2.0, -0.5)).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng.uniform(0.5, 2.0)).collect();
        let d: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| q.get(i, j) - p.get(i, j)).collect()).collect();
        let f = |x: &[f64]| -> f64 {
            (0..n).map(|i| (0..n).map(|j| 0.5 * d[i][j] * x[i] * x[j]).sum::<f64>()).sum()
        };
        let mut critical = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            // 0 free, 1 at lower, 2 at upper
            let state: Vec<usize> = (0..n).map(|i| code / 3usize.pow(i as u32) % 3).collect();
            let free: Vec<usize> = (0..n).filter(|i| state[*i] == 0).collect();
            let mut x: Vec<f64> = (0..n)
                .map(|i| match state[i] {
                    1 => lower[i],
                    2 => upper[i],
                    _ => 0.0,
                })
                .collect();
            if !free.is_empty() {
                let m: Vec<Vec<f64>> = free.iter().map(|i| free.iter().map(|j| d[*i][*j]).collect()).collect();
                let r: Vec<f64> = free
                    .iter()
                    .map(|i| -(0..n).filter(|j| state[*j] != 0).map(|j| d[*i][j] * x[j]).sum::<f64>())
                    .collect();
                let sol = gauss_solve(m, r, 0.05)?;
                for (k, i) in free.iter().enumerate() {
                    x[*i] = sol[k];
                }
            }
            let feasible = free.iter().all(|i| x[*i] > lower[*i] && x[*i] < upper[*i]);
            let grad: Vec<f64> = (0..n).map(|i| (0..n).map(|j| d[i][j] * x[j]).sum()).collect();
            let multipliers_ok = (0..n).all(|i| match state[i] {
                1 => grad[i] >= 0.0,
                2 => grad[i] <= 0.0,
                _ => true,
            });
            if feasible && multipliers_ok {
                critical.push(x);
            }
        }
        let f_low = critical.iter().map(|x| f(x)).fold(f64::INFINITY, f64::min);
        let set = ConstraintSet::new_box(Vector::new(lower.clone()), Vector::new(upper.clone())).unwrap();
        let g = CompositeOperator::new(q, Vector::zeros(n), set).unwrap();
        let h = Quadratic::new(p, Vector::zeros(n)).unwrap();
        let x0 = (0..n).map(|i| rng.uniform(lower[i], upper[i])).collect::<Vec<_>>();
        Some(BoxDc {
            g: OperatorSpec::SubdifferentialComposite(g),
            h: Arc::new(h),
            x0: Vector::new(x0),
            critical: critical.into_iter().map(Vector::new).collect(),
            f_low,
        })
    }
}

fn fixture_dc(name: &str) -> BoxDc {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    let problem = load_problem(&path).unwrap();
    let Instance::Dc { g, h } = problem.build().unwrap() else {
        panic!("{name} is not a dc fixture");
    };
    let m = problem.metadata;
    BoxDc {
        g,
        h,
        x0: m.x0.unwrap(),
        critical: m.solution_points.unwrap(),
        f_low: m.optimal_value.unwrap(),
    }
}

fn dc_fixtures() -> Vec<(&'static str, BoxDc)> {
    vec![
        ("dc-quadratic-linear", fixture_dc("dc-quadratic-linear.json")),
        ("dc-concave-box", fixture_dc("dc-concave-box.json")),
    ]
}

fn criterion7(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-7", seed));
    let start = Instant::now();
    let mut instances: Vec<(String, BoxDc)> = dc_fixtures().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    let mut rng = SeededRng::new(seed.wrapping_add(7));
    let mut rejected = 0;
    while instances.len() < 12 {
        match BoxDc::generate(&mut rng.fork()) {
            Some(d) => instances.push((format!("box-{}", instances.len() - 2), d)),
            None => rejected += 1,
        }
    }
    let gamma = 1.0;
    let (mut descent_bad, mut sum_bad, mut conv_bad, mut dist_bad) = (0, 0, 0, 0);
    for (i, (name, inst)) in instances.iter().enumerate() {
        let oracle = PointSet::new(inst.critical.clone());
        let opts = RunOptions::iterations(10_000).with_stop_tol(1e-7).with_distance(&oracle);
        let t = forward_backward_dc(&inst.g, inst.h.as_ref(), gamma, &inst.x0, &opts).unwrap();
        let worst_descent = t.descent.as_ref().unwrap().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum = t.squared_step_sum();
        let sum_bound = gamma * (t.objective_values[0] - inst.f_low) + 1e-6;
        let final_r = *t.residuals.as_ref().unwrap().last().unwrap_or(&f64::INFINITY);
        let dist = *t.dist_to_s.as_ref().unwrap().last().unwrap();
        if worst_descent > 1e-8 {
            descent_bad += 1;
        }
        if !(sum <= sum_bound) {
            sum_bad += 1;
        }
        if !(final_r < 1e-6 && t.meta.stop_reason == StopReason::Converged) {
            conv_bad += 1;
        }
        if !(dist <= 1e-4) {
            dist_bad += 1;
        }
        out.report.value("instance", i, "critical_points", inst.critical.len() as f64);
        out.report.with_bound("instance", i, "max_descent", worst_descent, 1e-8);
        out.report.with_bound("instance", i, "squared_step_sum", sum, sum_bound);
        out.report.with_bound("instance", i, "final_residual", final_r, 1e-6);
        out.report.with_bound("instance", i, "final_distance", dist, 1e-4);
        out.report.value("instance", i, "iterations", t.meta.iterations as f64);
        let _ = name;
    }
    let elapsed = start.elapsed().as_secs_f64();
    out.report.value("generator", 0, "rejected", rejected as f64);
    out.require("descent", descent_bad == 0, format!("{descent_bad} of 12 runs violate"));
    out.require("summability", sum_bad == 0, format!("{sum_bad} of 12 runs violate"));
    out.require("residual", conv_bad == 0, format!("{conv_bad} of 12 runs not below 1e-6"));
    out.require("critical_distance", dist_bad == 0, format!("{dist_bad} of 12 runs farther than 1e-4"));
    out.require("runtime", elapsed < 60.0, format!("{elapsed:.2} s < 60 s"));
    out
}

fn criterion8(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-8", seed));
    let mut worst = 0.0_f64;
    let mut row = 0;
    for (_, inst) in dc_fixtures() {
        for gamma in [0.25, 0.5, 1.0, 2.0] {
            for x0 in [inst.x0.clone(), Vector::from([-0.3]), Vector::from([0.9])] {
                let opts = RunOptions::iterations(50);
                let fb = forward_backward_dc(&inst.g, inst.h.as_ref(), gamma, &x0, &opts).unwrap();
                let (g2, h2) = fb_equivalent_pair(&inst.g, inst.h.clone(), gamma).unwrap();
                let dc = dca(&g2, h2.as_ref(), &x0, &opts).unwrap();
                let n = fb.iterates.len().min(dc.iterates.len());
                let dev = (0..n)
                    .map(|k| fb.iterates[k].distance(&dc.iterates[k]))
                    .fold(0.0, f64::max);
                let ok_len = fb.iterates.len() == 51 && dc.iterates.len() == 51;
                worst = worst.max(if ok_len { dev } else { f64::INFINITY });
                out.report.with_bound("pair", row, "max_iterate_deviation", dev, 1e-8);
                row += 1;
            }
        }
    }
    out.require("iterates", worst <= 1e-8, format!("max deviation {worst:.3e} over {row} runs of 50 iterations"));
    out
}

/// Householder reduction to tridiagonal form `(diagonal, off-diagonal)`.
fn tridiagonalize(m: &SymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut a = m.to_rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v = x.clone();
        v[0] -= alpha;
        let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        let mut h = vec![vec![0.0; n]; n];
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for i in 0..v.len() {
            for j in 0..v.len() {
                h[k + 1 + i][k + 1 + j] -= 2.0 * v[i] * v[j] / (vn * vn);
            }
        }
        let mul = |p: &Vec<Vec<f64>>, q: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| p[i][l] * q[l][j]).sum()).collect()).collect()
        };
        a = mul(&mul(&h, &a), &h);
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    let off = (1..n).map(|i| a[i][i - 1]).collect();
    (diag, off)
}

/// Number of eigenvalues below `x`, from the Sturm sequence of the
/// leading principal minors of the tridiagonal characteristic polynomial.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + 1e-300);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisection_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let (diag, off) = tridiagonalize(m);
    let n = diag.len();
    let radius = (0..n)
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { off[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-radius, radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(&diag, &off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn criterion9(seed: u64) -> Outcome {
    let mut out = Outcome::new(Report::new("acceptance-9", seed));
    let mut rng = SeededRng::new(seed.wrapping_add(9));
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let n = 1 + rng.index(8);
        let m = if i % 5 == 4 {
            // clustered and repeated eigenvalues
            let basis = rng.orthonormal_basis(n);
            let w: Vec<f64> = (0..n).map(|j| (j / 2) as f64 - 1.0).collect();
            SymmetricMatrix::from_spectrum(&w, &basis).unwrap()
        } else {
            let scale = 10f64.powf(rng.uniform(-2.0, 2.0));
            let mut rows = vec![vec![0.0; n]; n];
            for r in 0..n {
                for c in 0..=r {
                    rows[r][c] = scale * rng.uniform(-1.0, 1.0);
                }
            }
            SymmetricMatrix::from_lower(&rows).unwrap()
        };
        let eig = eigendecompose(&m, DEFAULT_EIGEN_TOL).unwrap();
        let oracle = bisection_eigenvalues(&m);
        let norm = m.norm_inf().max(f64::MIN_POSITIVE);
        let dev = eig
            .eigenvalues
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs() / norm)
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        out.report.with_bound("random", i, "max_scaled_deviation", dev, 1e-8);
    }
    out.require("random", worst <= 1e-8, format!("max |λ − λ_oracle| / ‖M‖∞ = {worst:.3e}"));

    let eig = eigendecompose(&example1_matrix(), DEFAULT_EIGEN_TOL).unwrap();
    let big = 0.5 * (330.0 + (330.0f64 * 330.0 - 216.0).sqrt());
    let expected = [0.0, 54.0 / big, big];
    let dev = eig
        .eigenvalues
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        out.report.with_bound("example1", i, "eigenvalue", *l, expected[i]);
    }
    out.require("example1", dev <= 1e-8, format!("max deviation {dev:.3e} from {{0, {:.7}, {:.6}}}", expected[1], expected[2]));
    out
}

fn run_criteria(seed: u64) -> Vec<Outcome> {
    let (c4, c5) = criteria4_5(seed);
    vec![
        criterion1(seed),
        criterion2(seed),
        criterion3(seed),
        c4,
        c5,
        criterion6(seed),
        criterion7(seed),
        criterion8(seed),
        criterion9(seed),
    ]
}

fn write_reports(outcomes: &[Outcome], dir: &Path) {
    for (i, o) in outcomes.iter().enumerate() {
        emit_report(&o.report.rows, &dir.join(format!("criterion{}.csv", i + 1))).unwrap();
    }
}

const TITLES: [&str; 10] = [
    "Example-1 regularized solve",
    "Example-1 least-norm solution",
    "Example-1 Nesterov comparison",
    "regularization path bound suite",
    "objective gap suite",
    "modulus certification",
    "forward-backward DC diagnostics",
    "DCA and forward-backward equivalence",
    "eigensolver oracle equivalence",
    "determinism",
];

fn main() -> ExitCode {
    let first = run_criteria(SEED);
    let dirs = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_reports(&first, dirs.0.path());
    if let Some(dir) = std::env::var_os("MONOREG_ACCEPTANCE_OUT") {
        fs::create_dir_all(&dir).unwrap();
        write_reports(&first, Path::new(&dir));
    }
    let second = run_criteria(SEED);
    write_reports(&second, dirs.1.path());
    let mut differing = Vec::new();
    for i in 1..=9 {
        let name = format!("criterion{i}.csv");
        let a = fs::read(dirs.0.path().join(&name)).unwrap();
        let b = fs::read(dirs.1.path().join(&name)).unwrap();
        if a != b {
            differing.push(name);
        }
    }
    let mut determinism = Outcome::new(Report::new("acceptance-10", SEED));
    determinism.require(
        "byte_identical",
        differing.is_empty(),
        if differing.is_empty() {
            "criteria 1-9 reports identical across two runs".to_string()
        } else {
            format!("differing: {}", differing.join(", "))
        },
    );

    let mut outcomes = first;
    outcomes.push(determinism);
    let mut unexpected = 0;
    for (i, o) in outcomes.iter().enumerate() {
        let number = i + 1;
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {number:>2} ({}): {}", TITLES[i], o.detail);
        let tolerated = o
            .failed
            .iter()
            .all(|f| KNOWN_DEVIATIONS.iter().any(|(n, name)| *n == number && name == f));
        if !o.pass {
            if tolerated {
                println!("       known deviation: the accepted interval excludes the exact value; see README");
            } else {
                unexpected += 1;
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria passed, {unexpected} unexpected failure(s)", outcomes.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
