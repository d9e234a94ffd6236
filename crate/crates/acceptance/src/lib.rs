//! Bookkeeping for the acceptance run: each criterion collects named
//! checks and prints a single PASS/FAIL line.

use std::time::{Duration, Instant};

pub struct Criterion {
    pub name: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    pub fn new(name: &'static str) -> Self {
        Criterion {
            name,
            checks: Vec::new(),
        }
    }

    /// Record one check; `what` should carry the measured numbers.
    pub fn check(&mut self, what: impl Into<String>, ok: bool) -> bool {
        self.checks.push((what.into(), ok));
        ok
    }

    /// `|got − want| ≤ tol`.
    pub fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) -> bool {
        let ok = (got - want).abs() <= tol;
        self.check(format!("{what} = {got:.10e} (want {want:.10e} ± {tol:e})"), ok)
    }

    /// `|got − want| ≤ rel·|want|`.
    pub fn rel(&mut self, what: &str, got: f64, want: f64, rel: f64) -> bool {
        let ok = (got - want).abs() <= rel * want.abs();
        self.check(
            format!("{what} = {got:.6e} (want {want:.6e} ± {:.2}%)", rel * 100.0),
            ok,
        )
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(w, _)| w.as_str())
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

/// Outcome of a whole run.
pub struct Summary {
    pub passed: Vec<&'static str>,
    pub failed: Vec<&'static str>,
}

impl Summary {
    /// Failures not listed in `expected`: these are regressions.
    pub fn unexpected<'a>(&'a self, expected: &'a [&str]) -> impl Iterator<Item = &'static str> + 'a {
        self.failed.iter().copied().filter(|f| !expected.contains(f))
    }
}

pub type Check = (&'static str, fn(&mut Criterion));

/// Run each criterion, print its line (and, on failure, the failing
/// checks indented below it).
pub fn run(criteria: Vec<Check>) -> Summary {
    let mut summary = Summary {
        passed: Vec::new(),
        failed: Vec::new(),
    };
    for (name, body) in criteria {
        let mut c = Criterion::new(name);
        let start = Instant::now();
        body(&mut c);
        let took = start.elapsed();
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} {name} ({} checks, {})", c.len(), seconds(took));
        for f in c.failures() {
            println!("       ✗ {f}");
        }
        if c.passed() {
            summary.passed.push(name);
        } else {
            summary.failed.push(name);
        }
    }
    summary
}

fn seconds(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}
