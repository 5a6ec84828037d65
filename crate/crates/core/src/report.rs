//! Check records shared by every verifier and by the command-line driver.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Instant;

pub const REPORT_FORMAT: &str = "ccj-report/1";

/// Violations kept verbatim per check; the rest are only counted.
const KEEP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub instances: u64,
    pub violations: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
    /// False when an enumeration was cut short by a bound.
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn skipped(id: &str, why: &str) -> Check {
        Check {
            id: id.to_string(),
            status: Status::Skipped,
            instances: 0,
            violations: 0,
            counterexamples: Vec::new(),
            complete: true,
            note: Some(why.to_string()),
            elapsed_ms: 0,
        }
    }
}

/// Running tally for one check.
pub struct Tally {
    id: String,
    instances: u64,
    violations: u64,
    kept: Vec<String>,
    complete: bool,
    note: Option<String>,
    started: Instant,
}

impl Tally {
    pub fn new(id: &str) -> Tally {
        Tally {
            id: id.to_string(),
            instances: 0,
            violations: 0,
            kept: Vec::new(),
            complete: true,
            note: None,
            started: Instant::now(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Records one instance; `msg` is only evaluated on failure.
    pub fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.instances += 1;
        if !ok {
            self.push_violation(msg());
        }
        ok
    }

    /// Records one instance whose evaluation may have errored.
    pub fn expect_res(&mut self, r: crate::Result<bool>, msg: impl FnOnce() -> String) -> bool {
        match r {
            Ok(ok) => self.expect(ok, msg),
            Err(e) => {
                self.instances += 1;
                self.push_violation(format!("{}: {e}", msg()));
                false
            }
        }
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.instances += 1;
        self.push_violation(msg.into());
    }

    fn push_violation(&mut self, msg: String) {
        self.violations += 1;
        if self.kept.len() < KEEP {
            self.kept.push(msg);
        }
    }

    pub fn incomplete(&mut self) {
        self.complete = false;
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.note = Some(n.into());
    }

    pub fn violations(&self) -> u64 {
        self.violations
    }

    pub fn instances(&self) -> u64 {
        self.instances
    }

    pub fn finish(self) -> Check {
        Check {
            status: if self.violations == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            id: self.id,
            instances: self.instances,
            violations: self.violations,
            counterexamples: self.kept,
            complete: self.complete,
            note: self.note,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub fixture: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(fixture: &str) -> Report {
        Report {
            format: REPORT_FORMAT.to_string(),
            fixture: fixture.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.id.as_str())
            .collect()
    }

    /// Same report with timing zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} fixture={}", self.format, self.fixture);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(
                out,
                "{status} {} instances={} violations={}",
                c.id, c.instances, c.violations
            );
            if !c.complete {
                out.push_str(" (verified at bound, truncated)");
            }
            let _ = writeln!(out, " {}ms", c.elapsed_ms);
            if let Some(n) = &c.note {
                let _ = writeln!(out, "     note: {n}");
            }
            for ce in &c.counterexamples {
                let _ = writeln!(out, "     counterexample: {ce}");
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(out, "# {passed}/{} checks passed", self.checks.len());
        out
    }
}
