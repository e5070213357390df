//! Reporting helpers for the acceptance run in `tests/acceptance.rs`.

use std::fmt;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} criterion {}: {} | {} ({:.2} s)",
            self.id, self.title, self.detail, self.seconds
        )
    }
}

/// Runs `check`, which returns `(passed, detail)`, and times it. Errors count
/// as failures with the error text as detail.
pub fn run<E: fmt::Display>(id: u32, title: &'static str, check: impl FnOnce() -> Result<(bool, String), E>) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn rel(value: f64, reference: f64) -> f64 {
    ((value - reference) / reference).abs()
}

/// Whether `|r - 1|` shrinks strictly along the sequence.
pub fn approaches_one(ratios: &[f64]) -> bool {
    ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs())
}
