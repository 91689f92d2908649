//! Pass/fail records shared by the verification routines.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Offending objects, roots or rays, capped in length.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 10;

impl Check {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed: true,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }

    /// Passes iff `witnesses` is empty.
    pub fn from_witnesses(name: &str, detail: impl Into<String>, mut witnesses: Vec<String>) -> Self {
        witnesses.truncate(MAX_WITNESSES);
        Check {
            name: name.to_string(),
            passed: witnesses.is_empty(),
            detail: detail.into(),
            witnesses,
        }
    }

    pub fn expect(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed: ok,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `Err(Verification)` naming the failed checks.
    pub fn into_result(self) -> Result<Report> {
        if self.passed() {
            return Ok(self);
        }
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        Err(Error::Verification(failed.join("; ")))
    }
}
