//! Long-format CSV reports and plain-text summaries.
//!
//! Every row is one measured quantity:
//! `experiment,seed,section,index,quantity,value,bound,check`, where `bound`
//! and `check` are empty for rows that carry no bound.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use super::error::CliError;
use crate::error::Error;

pub const REPORT_HEADER: [&str; 8] = ["experiment", "seed", "section", "index", "quantity", "value", "bound", "check"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Unchecked,
    Pass,
    Fail,
}

impl CheckStatus {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Unchecked => "",
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub seed: u64,
    pub section: String,
    pub index: usize,
    pub quantity: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub check: CheckStatus,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Serializes rows in the given order with `'\n'` line endings.
pub fn render_report(rows: &[ReportRow]) -> Result<Vec<u8>, CliError> {
    if rows.is_empty() {
        return Err(CliError::Data(Error::InvalidArgument("a report needs at least one row".into())));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io {
        path: "<report>".into(),
        message: e.to_string(),
    };
    w.write_record(REPORT_HEADER).map_err(io)?;
    for r in rows {
        let bound = r.bound.map(format_number).unwrap_or_default();
        w.write_record([
            r.experiment.as_str(),
            &r.seed.to_string(),
            &r.section,
            &r.index.to_string(),
            &r.quantity,
            &format_number(r.value),
            &bound,
            r.check.as_str(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io {
        path: "<report>".into(),
        message: e.to_string(),
    })
}

pub fn emit_report(rows: &[ReportRow], path: &Path) -> Result<(), CliError> {
    let bytes = render_report(rows)?;
    fs::write(path, bytes).map_err(|e| CliError::io(path, &e))
}

/// A named invariant that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

/// Rows, named check outcomes and free-form notes of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
    /// `(name, passed, detail)` in the order the checks ran.
    pub checks: Vec<(String, bool, String)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Report {
            experiment: experiment.into(),
            seed,
            rows: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, section: &str, index: usize, quantity: &str, value: f64, bound: Option<f64>, check: CheckStatus) {
        self.rows.push(ReportRow {
            experiment: self.experiment.clone(),
            seed: self.seed,
            section: section.into(),
            index,
            quantity: quantity.into(),
            value,
            bound,
            check,
        });
    }

    pub fn value(&mut self, section: &str, index: usize, quantity: &str, value: f64) {
        self.push(section, index, quantity, value, None, CheckStatus::Unchecked);
    }

    /// A row with a reference bound that is reported but not enforced.
    pub fn with_bound(&mut self, section: &str, index: usize, quantity: &str, value: f64, bound: f64) {
        self.push(section, index, quantity, value, Some(bound), CheckStatus::Unchecked);
    }

    /// A row whose bound is enforced; `ok` is the caller's verdict.
    pub fn checked(&mut self, section: &str, index: usize, quantity: &str, value: f64, bound: Option<f64>, ok: bool) {
        self.push(section, index, quantity, value, bound, CheckStatus::from_ok(ok));
    }

    pub fn vector(&mut self, section: &str, index: usize, name: &str, v: &crate::linalg::Vector) {
        for (i, x) in v.iter().enumerate() {
            self.value(section, index, &format!("{name}[{i}]"), *x);
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), ok, detail.into()));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn violations(&self) -> Vec<Violation> {
        self.checks
            .iter()
            .filter(|(_, ok, _)| !ok)
            .map(|(check, _, detail)| Violation {
                check: check.clone(),
                detail: detail.clone(),
            })
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|(_, ok, _)| *ok)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", self.experiment);
        let _ = writeln!(s, "seed: {}", self.seed);
        for note in &self.notes {
            let _ = writeln!(s, "{note}");
        }
        let _ = writeln!(s, "checks:");
        for (name, ok, detail) in &self.checks {
            let tag = if *ok { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "  [{tag}] {name}: {detail}");
        }
        let violations = self.violations();
        if violations.is_empty() {
            let _ = writeln!(s, "result: all {} checks passed", self.checks.len());
        } else {
            let _ = writeln!(s, "result: {} violation(s)", violations.len());
            for v in &violations {
                let _ = writeln!(s, "  violation {v}");
            }
        }
        s
    }

    /// Writes `report.csv` and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, &e))?;
        emit_report(&self.rows, &dir.join("report.csv"))?;
        let summary = dir.join("summary.txt");
        fs::write(&summary, self.summary()).map_err(|e| CliError::io(&summary, &e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(value: f64) -> ReportRow {
        ReportRow {
            experiment: "demo".into(),
            seed: 7,
            section: "path".into(),
            index: 0,
            quantity: "x".into(),
            value,
            bound: Some(0.5),
            check: CheckStatus::Pass,
        }
    }

    #[test]
    fn single_row_is_two_lines() {
        let text = String::from_utf8(render_report(&[row(0.1)]).unwrap()).unwrap();
        assert_eq!(
            text,
            "experiment,seed,section,index,quantity,value,bound,check\n\
             demo,7,path,0,x,1.0000000000000001e-1,5.0000000000000000e-1,pass\n"
        );
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.7776975382041346e-12, f64::MAX, 5e-324] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn empty_rows_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let err = emit_report(&[], &dir.path().join("r.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn repeated_emission_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![row(1.5), row(-0.25)];
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        emit_report(&rows, &a).unwrap();
        emit_report(&rows, &b).unwrap();
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }

    #[test]
    fn io_error_names_path() {
        let err = emit_report(&[row(1.0)], Path::new("/nonexistent-dir/r.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/r.csv"));
    }

    #[test]
    fn summary_lists_named_violations() {
        let mut r = Report::new("demo", 1);
        r.check("descent", true, "ok");
        r.check("summability", false, "sum 2 > 1");
        assert!(!r.is_clean());
        let s = r.summary();
        assert!(s.contains("[FAIL] summability"));
        assert!(s.contains("violation summability: sum 2 > 1"));
    }
}
