//! Machine-readable run reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One executed check. `asserted = false` marks evidence that is reported but never fails a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    /// Measured quantity (residual, relative error, eigenvalue, …); absent when the check errored.
    pub value: Option<f64>,
    pub tol: f64,
    pub passed: bool,
    pub asserted: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// A check passing when `value <= tol`.
    pub fn at_most(suite: &str, name: impl Into<String>, value: f64, tol: f64) -> CheckRecord {
        CheckRecord {
            suite: suite.to_string(),
            name: name.into(),
            value: Some(value),
            tol,
            passed: value <= tol,
            asserted: true,
            details: BTreeMap::new(),
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(suite: &str, name: impl Into<String>, tol: f64, err: &Error) -> CheckRecord {
        CheckRecord {
            suite: suite.to_string(),
            name: name.into(),
            value: None,
            tol,
            passed: false,
            asserted: true,
            details: BTreeMap::new(),
            note: Some(err.to_string()),
        }
    }

    pub fn with_detail(mut self, key: &str, v: f64) -> CheckRecord {
        self.details.insert(key.to_string(), v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckRecord {
        self.note = Some(note.into());
        self
    }

    /// Marks the check as reported evidence only.
    pub fn unasserted(mut self) -> CheckRecord {
        self.asserted = false;
        self
    }
}

/// Result document of one `derive` or `verify` run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Report {
        Report { command: command.to_string(), config, ..Report::default() }
    }

    /// True iff every asserted check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.asserted)
    }

    /// Pretty-printed JSON; field order and float formatting are fixed, so equal reports give equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Io(format!("corrupt report: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Report> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Report::from_json(&text)
    }

    /// (passed, total) per suite, counting asserted checks only.
    pub fn suite_counts(&self) -> BTreeMap<String, (usize, usize)> {
        let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for c in self.checks.iter().filter(|c| c.asserted) {
            let e = out.entry(c.suite.clone()).or_default();
            e.0 += usize::from(c.passed);
            e.1 += 1;
        }
        out
    }
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

/// Human-readable table of one or more reports, followed by per-suite pass counts.
pub fn render(reports: &[Report]) -> String {
    let checks: Vec<&CheckRecord> = reports.iter().flat_map(|r| &r.checks).collect();
    if checks.is_empty() {
        return "no checks recorded\n".to_string();
    }
    let name_w = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(4).max(4);
    let suite_w = checks.iter().map(|c| c.suite.len()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<suite_w$}  {:<name_w$}  {:>10}  {:>10}  status", "suite", "check", "value", "tol");
    for c in &checks {
        let status = match (c.passed, c.asserted) {
            (_, false) => "info",
            (true, true) => "PASS",
            (false, true) => "FAIL",
        };
        let _ = write!(
            out,
            "{:<suite_w$}  {:<name_w$}  {:>10}  {:>10}  {status}",
            c.suite,
            c.name,
            fmt_value(c.value),
            format!("{:.1e}", c.tol)
        );
        for (k, v) in &c.details {
            let _ = write!(out, "  {k}={v:.8e}");
        }
        if let Some(note) = &c.note {
            let _ = write!(out, "  ({note})");
        }
        out.push('\n');
    }
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in reports {
        for (suite, (p, t)) in r.suite_counts() {
            let e = counts.entry(suite).or_default();
            e.0 += p;
            e.1 += t;
        }
    }
    out.push('\n');
    for (suite, (p, t)) in &counts {
        let _ = writeln!(out, "{suite}: {p}/{t} passed");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_renders_placeholder() {
        assert_eq!(render(&[Report::new("verify", BTreeMap::new())]), "no checks recorded\n");
    }

    #[test]
    fn json_round_trip_and_counts() {
        let mut r = Report::new("verify", BTreeMap::from([("m".to_string(), "1".to_string())]));
        r.checks.push(CheckRecord::at_most("isometry", "m=1 r=1", 1e-9, 0.02).with_detail("lhs", 1.5).with_detail("rhs", 1.5));
        r.checks.push(CheckRecord::at_most("slice", "m=0", 2.0, 1e-3));
        r.checks.push(CheckRecord::at_most("slice", "m=1", 0.5, 1e-3).unasserted());
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.all_passed());
        let text = render(&[r]);
        assert!(text.contains("lhs=1.50000000e0") && text.contains("isometry: 1/1 passed") && text.contains("slice: 0/1 passed"));
        assert!(matches!(Report::from_json("{"), Err(Error::Io(_))));
    }
}
