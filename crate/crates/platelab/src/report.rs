//! Plain-text verification reports.
//!
//! Reports are rendered deterministically: no timestamps, stable ordering,
//! fixed float formatting, LF line endings. Each check names the
//! mathematical claim it verifies alongside the measured value and the
//! tolerance it was held to.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One verified claim.
#[derive(Clone, Debug)]
pub struct Check {
    /// Short kebab-case identifier.
    pub name: String,
    /// The property being checked, stated mathematically.
    pub claim: String,
    pub status: CheckStatus,
    pub measured: f64,
    pub tolerance: f64,
    /// Extra context (counts, windows, rates).
    pub note: String,
}

impl Check {
    pub fn pass_if(
        name: &str,
        claim: &str,
        measured: f64,
        tolerance: f64,
        pass: bool,
        note: &str,
    ) -> Self {
        Check {
            name: name.to_string(),
            claim: claim.to_string(),
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured,
            tolerance,
            note: note.to_string(),
        }
    }

    /// Standard form: pass when `measured <= tolerance`.
    pub fn bounded(name: &str, claim: &str, measured: f64, tolerance: f64, note: &str) -> Self {
        Self::pass_if(
            name,
            claim,
            measured,
            tolerance,
            measured <= tolerance,
            note,
        )
    }

    pub fn skipped(name: &str, claim: &str, note: &str) -> Self {
        Check {
            name: name.to_string(),
            claim: claim.to_string(),
            status: CheckStatus::Skipped,
            measured: f64::NAN,
            tolerance: f64::NAN,
            note: note.to_string(),
        }
    }
}

/// Full run report: config echo, checks, artifact list.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub title: String,
    pub config_echo: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(title: &str) -> Self {
        RunReport {
            title: title.to_string(),
            ..Default::default()
        }
    }

    pub fn echo(&mut self, key: &str, value: String) {
        self.config_echo.push((key.to_string(), value));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let _ = writeln!(out, "{}", "=".repeat(self.title.len()));
        let _ = writeln!(out);
        let _ = writeln!(out, "config:");
        for (k, v) in &self.config_echo {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            let mut line = format!("  [{tag}] {} :: {}", c.name, c.claim);
            if c.status != CheckStatus::Skipped {
                let _ = write!(line, " :: measured {:e} tol {:e}", c.measured, c.tolerance);
            }
            if !c.note.is_empty() {
                let _ = write!(line, " ({})", c.note);
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out);
        if !self.artifacts.is_empty() {
            let _ = writeln!(out, "artifacts:");
            for a in &self.artifacts {
                let _ = writeln!(out, "  {a}");
            }
            let _ = writeln!(out);
        }
        let passed = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Pass)
            .count();
        let failed = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count();
        let skipped = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Skipped)
            .count();
        let overall = if failed == 0 { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "overall: {overall} ({passed} passed, {failed} failed, {skipped} skipped)"
        );
        out
    }
}

/// 17-significant-digit float for CSV artifacts; round-trips f64 exactly.
pub fn csv_float(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    format!("{x:.16e}")
}
