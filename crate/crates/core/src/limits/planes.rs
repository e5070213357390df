use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::numerics::bessel::k0_unchecked;
use crate::numerics::quadrature::{semiinfinite, GaussLegendre};
use crate::numerics::QuadratureSpec;

/// Reflection coefficient of a plane carrying a delta potential of strength
/// `g_area` (per unit area), at `gamma = sqrt(xi^2 + q^2)`.
///
/// `g_area = inf` gives the Dirichlet value 1.
pub fn delta_plane_reflection(g_area: f64, gamma: f64) -> f64 {
    1.0 / (1.0 + 2.0 * gamma / g_area)
}

/// Energy per unit area of two delta planes at separation `b`.
///
/// The frequency and in-plane momentum integrals depend on `gamma` only and are
/// done in polar form: `E/A = (1/4pi^2) int_0^inf dgamma gamma^2 ln(1 - r^2 e^{-2 gamma b})`.
pub fn lifshitz_delta_planes(g_area: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(domain("lifshitz_delta_planes", format!("b must be positive, got {b}")));
    }
    if !(g_area >= 0.0) {
        return Err(domain("lifshitz_delta_planes", format!("g_area must be >= 0, got {g_area}")));
    }
    quad.validate()?;
    if g_area == 0.0 {
        return Ok(0.0);
    }
    let f = |gamma: f64| -> Result<f64> {
        // 1 - r^2 e = (1 - e) + e (1 - r)(1 + r), each piece free of cancellation
        let e = (-2.0 * gamma * b).exp();
        let r = delta_plane_reflection(g_area, gamma);
        let one_minus_r = (2.0 * gamma / g_area) * r;
        let x = r * r * e;
        if x < 0.5 {
            return Ok(gamma * gamma * (-x).ln_1p());
        }
        let arg = -(-2.0 * gamma * b).exp_m1() + e * one_minus_r * (1.0 + r);
        if !(arg > 0.0) {
            return Err(Error::Validity {
                xi: gamma,
                q: Vec::new(),
                h2: 1.0 - arg,
            });
        }
        Ok(gamma * gamma * arg.ln())
    };
    let rule = GaussLegendre::new(quad.xi_order);
    let mut breaks = Vec::new();
    if g_area.is_finite() {
        breaks.push(0.5 * g_area);
    }
    let est = semiinfinite(&rule, &f, quad, 1.0 / b, false, &breaks)?;
    Ok(est.value / (4.0 * PI * PI))
}

/// Energy per unit area of two Dirichlet planes, `-pi^2 / (1440 b^3)`.
pub fn dirichlet_planes_energy(b: f64) -> f64 {
    -PI * PI / (1440.0 * b.powi(3))
}

/// The line-scatterer limit of two chains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireLimit {
    /// Energy per unit length from the full momentum integral.
    pub value: f64,
    /// Leading asymptote `-1 / (8 pi b^2 ln^2(a/b))`.
    pub asymptote: f64,
    /// `p*` with `K_0(p*) = |ln(a/b)|`, in units of `1/b`. Below it the
    /// expanded kernel exceeds one and the disc `p < p*` is left out.
    pub infrared_cutoff: f64,
}

fn solve_k0(level: f64) -> f64 {
    // K_0 is decreasing; bisect in ln p
    let (mut lo, mut hi) = (-(level + 40.0), 5.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if k0_unchecked(mid.exp()) > level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Energy per unit length of two chains at lattice spacing `a` much smaller
/// than their separation `b`. The coupling drops out of this limit.
///
/// With `p = b sqrt(xi^2 + k^2)` the integral is
/// `(1/(4 pi b^2)) int p ln(1 - K_0(p)^2 / ln^2(a/b)) dp`.
pub fn wire_limit_energy(a: f64, b: f64, quad: &QuadratureSpec) -> Result<WireLimit> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(domain("wire_limit_energy", format!("a and b must be positive, got a={a}, b={b}")));
    }
    let ln_ab = (a / b).ln();
    if !(ln_ab < -1e-12) {
        return Err(domain(
            "wire_limit_energy",
            format!("needs a/b < 1 with ln(a/b) away from zero, got a/b={}", a / b),
        ));
    }
    quad.validate()?;
    let level = -ln_ab;
    let p_star = solve_k0(level);
    let f = |x: f64| -> Result<f64> {
        let p = p_star + x;
        let k = k0_unchecked(p);
        if !(k < level) {
            return Ok(0.0);
        }
        let arg = (level - k) * (level + k) / (level * level);
        Ok(p * arg.ln())
    };
    let rule = GaussLegendre::new(quad.xi_order);
    // logarithmic endpoint singularity at x = 0
    let breaks: Vec<f64> = (1..=6).map(|k| p_star.max(1e-3) * 10f64.powi(-2 * k)).collect();
    let est = semiinfinite(&rule, &f, quad, 1.0, false, &breaks)?;
    Ok(WireLimit {
        value: est.value / (4.0 * PI * b * b),
        asymptote: -1.0 / (8.0 * PI * b * b * ln_ab * ln_ab),
        infrared_cutoff: p_star,
    })
}
