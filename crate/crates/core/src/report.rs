//! Pass/fail bookkeeping shared by the verification routines.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One named identity with its worst residual.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            passed: residual.is_finite() && residual <= tol,
        }
    }

    /// A check with a boolean outcome; the residual is 0 or 1.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tol: 0.0,
            passed: ok,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Records `residual` under `name`, keeping only the worst value seen.
    pub fn record(&mut self, name: &str, residual: f64, tol: f64) {
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => {
                if residual > c.residual || residual.is_nan() {
                    *c = Check::new(name, residual, tol);
                }
            }
            None => self.checks.push(Check::new(name, residual, tol)),
        }
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.record(&c.name, c.residual, c.tol);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {:<48} residual {:.3e} (tol {:.1e})",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.residual,
                c.tol
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_keeps_worst() {
        let mut r = Report::new("t");
        r.record("a", 1e-14, 1e-12);
        r.record("a", 1e-13, 1e-12);
        r.record("a", 1e-15, 1e-12);
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].residual, 1e-13);
        assert!(r.all_passed());
        r.record("b", f64::NAN, 1.0);
        assert!(!r.all_passed());
    }
}
