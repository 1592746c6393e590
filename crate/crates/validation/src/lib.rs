//! Acceptance harness plumbing: each criterion records named checks and is
//! summarised by a single PASS/FAIL line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Checks collected while running one criterion.
#[derive(Debug, Default)]
pub struct Report {
    checks: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Report {
    /// Record a check and echo it immediately.
    pub fn check(&mut self, label: impl Into<String>, pass: bool) -> bool {
        let label = label.into();
        println!("    {} {label}", if pass { "ok  " } else { "FAIL" });
        self.checks.push((label, pass));
        pass
    }

    /// `|value - expected| <= tol`, with the numbers in the label.
    pub fn close(&mut self, label: &str, value: f64, expected: f64, tol: f64) -> bool {
        let diff = (value - expected).abs();
        self.check(
            format!("{label}: {value:.10} vs {expected:.10} (|diff| {diff:.2e} <= {tol:.0e})"),
            diff <= tol,
        )
    }

    /// Informational line that does not affect the verdict.
    pub fn note(&mut self, text: impl Into<String>) {
        let text = text.into();
        println!("    ..   {text}");
        self.notes.push(text);
    }

    pub fn n_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, p)| !p)
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

/// A numbered criterion and the function that evaluates it.
pub struct Criterion {
    pub number: u32,
    pub name: &'static str,
    /// Wall-clock budget; exceeding it is a failure.
    pub budget: Duration,
    pub run: fn(&mut Report),
}

#[derive(Debug)]
pub struct Outcome {
    pub number: u32,
    pub name: &'static str,
    pub passed: bool,
    pub line: String,
}

/// Evaluate one criterion, converting panics into failures.
pub fn evaluate(c: &Criterion) -> Outcome {
    println!("criterion {} ({})", c.number, c.name);
    let mut report = Report::default();
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| (c.run)(&mut report)));
    let elapsed = start.elapsed();
    let mut problems: Vec<String> = report.failures().iter().map(|s| s.to_string()).collect();
    if let Err(payload) = result {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        problems.push(format!("aborted: {msg}"));
    }
    if elapsed > c.budget {
        problems.push(format!(
            "runtime {:.1} s over budget {:.0} s",
            elapsed.as_secs_f64(),
            c.budget.as_secs_f64()
        ));
    }
    if report.n_checks() == 0 && problems.is_empty() {
        problems.push("no checks recorded".into());
    }
    let passed = problems.is_empty();
    let detail = if passed {
        format!("{} checks", report.n_checks())
    } else {
        format!(
            "{} of {} checks failed; first: {}",
            problems.len(),
            report.n_checks().max(problems.len()),
            problems[0]
        )
    };
    let line = format!(
        "criterion {} {}: {} ({detail}; {:.1} s)",
        c.number,
        c.name,
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    println!("{line}\n");
    Outcome {
        number: c.number,
        name: c.name,
        passed,
        line,
    }
}

/// Run every criterion whose number or name matches `filter` (all when
/// `None`), print a summary block and return whether all passed.
pub fn run_all(criteria: &[Criterion], filter: Option<&str>) -> bool {
    let selected: Vec<&Criterion> = criteria
        .iter()
        .filter(|c| match filter {
            None => true,
            Some(f) => c.number.to_string() == f || c.name.contains(f),
        })
        .collect();
    let outcomes: Vec<Outcome> = selected.iter().map(|c| evaluate(c)).collect();
    println!("acceptance summary");
    for o in &outcomes {
        println!("{}", o.line);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    failed == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passing(r: &mut Report) {
        r.close("one", 1.0, 1.0 + 1e-12, 1e-10);
    }

    fn failing(r: &mut Report) {
        r.check("bad", false);
    }

    fn panicking(_: &mut Report) {
        panic!("boom");
    }

    fn crit(run: fn(&mut Report)) -> Criterion {
        Criterion {
            number: 1,
            name: "t",
            budget: Duration::from_secs(60),
            run,
        }
    }

    #[test]
    fn verdicts() {
        assert!(evaluate(&crit(passing)).passed);
        assert!(!evaluate(&crit(failing)).passed);
        let o = evaluate(&crit(panicking));
        assert!(!o.passed && o.line.contains("boom"));
    }

    #[test]
    fn empty_criterion_fails() {
        assert!(!evaluate(&crit(|_| {})).passed);
    }
}
