//! Parameter lists: `start:stop:count[:lin|log]` or comma-separated values.

use thiserror::Error;

/// Upper bound on generated points, so a typo cannot exhaust memory.
pub const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid range {input:?}: {message}")]
pub struct RangeError {
    pub input: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

fn number(s: &str, input: &str) -> Result<f64, RangeError> {
    let v: f64 = s.trim().parse().map_err(|_| RangeError {
        input: input.into(),
        message: format!("not a number: {:?}", s.trim()),
    })?;
    if !v.is_finite() {
        return Err(RangeError {
            input: input.into(),
            message: format!("not finite: {v}"),
        });
    }
    Ok(v)
}

/// Evenly spaced points including both ends; `Log` spaces them evenly in `ln`.
pub fn spaced(start: f64, stop: f64, count: usize, spacing: Spacing) -> Vec<f64> {
    let last = (count - 1) as f64;
    let mut out: Vec<f64> = (0..count)
        .map(|i| {
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => start * (1.0 - t) + stop * t,
                Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
            }
        })
        .collect();
    out[0] = start;
    out[count - 1] = stop;
    out
}

pub fn parse_range(input: &str) -> Result<Vec<f64>, RangeError> {
    let err = |message: &str| RangeError {
        input: input.into(),
        message: message.into(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if !s.contains(':') {
        return s.split(',').map(|item| number(item, input)).collect();
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(err("expected start:stop:count[:lin|log]"));
    }
    let start = number(parts[0], input)?;
    let stop = number(parts[1], input)?;
    let count: usize = parts[2].trim().parse().map_err(|_| err("count must be an integer"))?;
    if count < 2 {
        return Err(err("count must be at least 2"));
    }
    if count > MAX_POINTS {
        return Err(err("too many points"));
    }
    let spacing = match parts.get(3).map(|p| p.trim()) {
        None | Some("lin") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(_) => return Err(err("spacing must be lin or log")),
    };
    if spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
        return Err(err("log spacing needs positive ends"));
    }
    Ok(spaced(start, stop, count, spacing))
}
