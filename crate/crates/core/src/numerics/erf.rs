//! Error-function helpers for the screened lattice sums.

use std::f64::consts::PI;

pub use libm::{erf, erfc};

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 0`.
///
/// The Gaussian-split lattice sums combine large exponentials with tiny erfc
/// values; evaluating them through this function keeps every term finite.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0 || x.is_nan());
    if x < 26.0 {
        // x^2 = hi + lo exactly; exp(lo) ~ 1 + lo keeps the exponent error at one ulp
        let hi = x * x;
        let lo = x.mul_add(x, -hi);
        hi.exp() * (1.0 + lo) * erfc(x)
    } else {
        // continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), modified Lentz
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..200 {
            let a = 0.5 * k as f64;
            d = x + a * d;
            d = if d.abs() < tiny { tiny } else { d };
            c = x + a / c;
            c = if c.abs() < tiny { tiny } else { c };
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 / (f * PI.sqrt())
    }
}
