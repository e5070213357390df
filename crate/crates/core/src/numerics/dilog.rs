use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Dilogarithm `Li2(x) = sum_{k>=1} x^k / k^2` on `[0, 1)`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain("dilog", format!("argument must lie in [0, 1), got {x}")));
    }
    if x <= 0.5 {
        Ok(dilog_series(x))
    } else {
        // Euler reflection
        let y = 1.0 - x;
        Ok(PI * PI / 6.0 - x.ln() * y.ln() - dilog_series(y))
    }
}

fn dilog_series(x: f64) -> f64 {
    let mut term = x;
    let mut acc: f64 = 0.0;
    let mut k = 1.0;
    while term > 1e-18 * acc.max(f64::MIN_POSITIVE) {
        acc += term / (k * k);
        term *= x;
        k += 1.0;
    }
    acc
}
