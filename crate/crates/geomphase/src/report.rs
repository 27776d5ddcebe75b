//! Pass/fail bookkeeping for command runs: named measured values, each judged
//! against its declared tolerance, serializable for downstream tooling.

use std::fmt;

use serde::Serialize;

/// One measured value with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Aggregated outcome of one command invocation.
///
/// Wall time is shown in the human-readable rendering but excluded from the
/// serialized form so that reruns with identical inputs produce identical
/// documents.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            records: Vec::new(),
            pass: true,
            wall_time_s: 0.0,
        }
    }

    /// Record `value` judged as `value <= tolerance`; returns the verdict.
    pub fn check(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> bool {
        let pass = value <= tolerance && value.is_finite();
        self.records.push(CheckRecord {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            pass,
            note: None,
        });
        self.pass &= pass;
        pass
    }

    /// Record `value` judged as `value >= minimum` (convergence ratios).
    pub fn check_at_least(&mut self, name: impl Into<String>, value: f64, minimum: f64) -> bool {
        let pass = value >= minimum && value.is_finite();
        self.records.push(CheckRecord {
            name: name.into(),
            value,
            tolerance: Some(minimum),
            pass,
            note: Some("lower bound".into()),
        });
        self.pass &= pass;
        pass
    }

    /// Record an informational value with no verdict attached.
    pub fn info(&mut self, name: impl Into<String>, value: f64) {
        self.records.push(CheckRecord {
            name: name.into(),
            value,
            tolerance: None,
            pass: true,
            note: None,
        });
    }

    /// Record an informational value with an explanatory note.
    pub fn annotate(&mut self, name: impl Into<String>, value: f64, note: impl Into<String>) {
        self.records.push(CheckRecord {
            name: name.into(),
            value,
            tolerance: None,
            pass: true,
            note: Some(note.into()),
        });
    }

    pub fn finish(&mut self, wall_time_s: f64) {
        self.wall_time_s = wall_time_s;
        self.pass = self.records.iter().all(|r| r.pass);
    }

    pub fn to_json(&self) -> String {
        // Plain struct of strings, floats, and bools: serialization is
        // infallible (non-finite floats serialize as null).
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        for r in &self.records {
            let verdict = match r.tolerance {
                Some(_) if r.pass => "PASS",
                Some(_) => "FAIL",
                None => "info",
            };
            write!(f, "  [{verdict}] {} = {:.6e}", r.name, r.value)?;
            if let Some(tol) = r.tolerance {
                let relation = match r.note.as_deref() {
                    Some("lower bound") => ">=",
                    _ => "<=",
                };
                write!(f, " ({relation} {tol:.1e})")?;
            }
            if let Some(note) = r.note.as_deref() {
                if note != "lower bound" {
                    write!(f, " [{note}]")?;
                }
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "result: {} ({} records, {:.3} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.records.len(),
            self.wall_time_s
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_aggregate_into_overall_pass() {
        let mut report = RunReport::new("test");
        assert!(report.check("small", 1e-12, 1e-8));
        report.info("context", 42.0);
        assert!(report.pass);
        assert!(!report.check("large", 1.0, 1e-8));
        report.finish(0.1);
        assert!(!report.pass);
    }

    #[test]
    fn json_rendering_excludes_wall_time() {
        let mut report = RunReport::new("test");
        report.check("x", 0.0, 1.0);
        report.finish(123.456);
        let json = report.to_json();
        assert!(!json.contains("wall_time"));
        assert!(json.contains("\"command\": \"test\""));
    }

    #[test]
    fn lower_bound_checks_pass_above_threshold() {
        let mut report = RunReport::new("test");
        assert!(report.check_at_least("ratio", 4.1, 3.5));
        assert!(!report.check_at_least("ratio", 2.0, 3.5));
    }

    #[test]
    fn non_finite_values_never_pass() {
        let mut report = RunReport::new("test");
        assert!(!report.check("nan", f64::NAN, 1.0));
        assert!(!report.check_at_least("nan", f64::NAN, 1.0));
    }
}
