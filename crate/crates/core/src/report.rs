//! Outcome of an exhaustive or sampled verification run.

use std::fmt;

/// Result of checking a family of identities.
///
/// A report passes when no violation was recorded. `vacuous` marks checks
/// whose hypothesis did not hold, so nothing was asserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub name: String,
    pub cases: u64,
    pub violations: Vec<String>,
    pub details: Vec<(String, String)>,
    pub vacuous: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            cases: 0,
            violations: Vec::new(),
            details: Vec::new(),
            vacuous: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records one checked case; `describe` is only called on failure.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl ToString) {
        self.details.push((key.into(), value.to_string()));
    }

    /// Folds another report's cases and violations into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.violations
            .extend(other.violations.into_iter().map(|v| format!("{}: {}", other.name, v)));
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if !self.passed() {
            "FAIL"
        } else if self.vacuous {
            "VACUOUS"
        } else {
            "PASS"
        };
        write!(f, "{} {} ({} cases", status, self.name, self.cases)?;
        if !self.violations.is_empty() {
            write!(
                f,
                ", {} violations; first: {}",
                self.violations.len(),
                self.violations[0]
            )?;
        }
        write!(f, ")")
    }
}
