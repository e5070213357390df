//! Energy per cell from the momentum-space TGTG formula:
//!
//! chains: `E = (1/2pi) int dxi (a/2pi) int_BZ dq ln(1 - |h|^2)`,
//! lattices: `E = (1/2pi) int dxi a^2 int_BZ d^2q/(2pi)^2 ln(1 - |h|^2)`.
//!
//! `|h|` is even in `q`, so chains integrate `[0, pi/a]` and lattices the half
//! zone `q1 >= 0` (the quarter zone when each displacement component is 0 or
//! `a/2`, where `|h|` is also even in `q2`).

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use super::kernel::{eval_1d, eval_2d};
use super::{Diagnostics, EnergyResult};
use crate::error::Result;
use crate::lattice::{ChainPairConfig, Lattice2DPairConfig, NumericsSpec};
use crate::numerics::quadrature::{semiinfinite, Adaptive, GaussLegendre};

/// Inner integrals are held to a tenth of the outer tolerance.
const INNER_TOL_RATIO: f64 = 0.1;
const MAX_BREAKS: usize = 12;

#[derive(Default)]
struct Tracker {
    max_h2: AtomicU64,
    evaluations: AtomicUsize,
}

impl Tracker {
    fn record(&self, h2: f64) {
        // non-negative floats order like their bit patterns
        self.max_h2.fetch_max(h2.max(0.0).to_bits(), Ordering::Relaxed);
        self.evaluations.fetch_add(1, Ordering::Relaxed);
    }

    fn max_h2(&self) -> f64 {
        f64::from_bits(self.max_h2.load(Ordering::Relaxed))
    }
}

/// Panel boundaries on `[0, hi]`, geometric towards the scale `low` near zero.
fn breaks(hi: f64, low: f64) -> Vec<f64> {
    let mut pts = vec![hi];
    let mut x = hi;
    while x > 2.0 * low && pts.len() <= MAX_BREAKS {
        x *= 0.25;
        pts.push(x);
    }
    pts.push(0.0);
    pts.reverse();
    pts
}

fn inner_rule(order: usize) -> GaussLegendre {
    GaussLegendre::new(order)
}

/// Energy per cell of two parallel chains.
pub fn energy_1d(cfg: &ChainPairConfig, numerics: &NumericsSpec) -> Result<EnergyResult> {
    numerics.validate()?;
    let quad = &numerics.quadrature;
    let trunc = &numerics.truncation;
    let a = cfg.a;
    let zone = PI / a;
    let tracker = Tracker::default();
    let q_rule = inner_rule(quad.q_order);
    let xi_rule = GaussLegendre::new(quad.xi_order);
    let inner_tol = quad.adaptive_tol * INNER_TOL_RATIO;

    let integrand = |xi: f64| -> Result<f64> {
        let f = |q: f64| -> Result<f64> {
            let k = eval_1d(xi, q, cfg, trunc)?;
            tracker.record(k.h2);
            Ok(k.log_factor)
        };
        let pts = breaks(zone, xi.min(1.0 / cfg.b));
        let est = Adaptive::new(&q_rule, inner_tol)
            .max_panels(quad.max_panels)
            .integrate(f, &pts)?;
        // (a / 2 pi) * 2 for the folded zone
        Ok(est.value * a / PI)
    };
    let est = semiinfinite(&xi_rule, &integrand, quad, 1.0 / cfg.d(), numerics.parallel, &[])?;
    Ok(EnergyResult {
        value: est.value / (2.0 * PI),
        error_estimate: est.error / (2.0 * PI),
        diagnostics: Diagnostics {
            max_h2: tracker.max_h2(),
            tail_bound: (-trunc.log_budget()).exp(),
            evaluations: tracker.evaluations.load(Ordering::Relaxed),
            xi_panels: est.panels,
        },
    })
}

fn quarter_zone(cfg: &Lattice2DPairConfig) -> bool {
    cfg.c.iter().all(|&c| c == 0.0 || c == 0.5 * cfg.a)
}

/// Energy per cell of two parallel square lattices.
pub fn energy_2d(cfg: &Lattice2DPairConfig, numerics: &NumericsSpec) -> Result<EnergyResult> {
    numerics.validate()?;
    let quad = &numerics.quadrature;
    let trunc = &numerics.truncation;
    let a = cfg.a;
    let zone = PI / a;
    let quarter = quarter_zone(cfg);
    let tracker = Tracker::default();
    let q_rule = inner_rule(quad.q_order);
    let xi_rule = GaussLegendre::new(quad.xi_order);
    let inner_tol = quad.adaptive_tol * INNER_TOL_RATIO;
    let low = |x: f64| x.min(1.0 / cfg.b);

    let integrand = |xi: f64| -> Result<f64> {
        let row = |q1: f64| -> Result<f64> {
            let f = |q2: f64| -> Result<f64> {
                let k = eval_2d(xi, [q1, q2], cfg, trunc)?;
                tracker.record(k.h2);
                Ok(k.log_factor)
            };
            let half = breaks(zone, low(xi.hypot(q1)));
            let pts: Vec<f64> = if quarter {
                half
            } else {
                half.iter().rev().map(|x| -x).chain(half.iter().skip(1).copied()).collect()
            };
            let est = Adaptive::new(&q_rule, inner_tol)
                .max_panels(quad.max_panels)
                .integrate(f, &pts)?;
            Ok(est.value)
        };
        let pts = breaks(zone, low(xi));
        let est = Adaptive::new(&q_rule, inner_tol)
            .max_panels(quad.max_panels)
            .integrate(row, &pts)?;
        let fold = if quarter { 4.0 } else { 2.0 };
        Ok(est.value * fold * (a / (2.0 * PI)).powi(2))
    };
    let est = semiinfinite(&xi_rule, &integrand, quad, 1.0 / cfg.d(), numerics.parallel, &[])?;
    Ok(EnergyResult {
        value: est.value / (2.0 * PI),
        error_estimate: est.error / (2.0 * PI),
        diagnostics: Diagnostics {
            max_h2: tracker.max_h2(),
            tail_bound: (-trunc.log_budget()).exp(),
            evaluations: tracker.evaluations.load(Ordering::Relaxed),
            xi_panels: est.panels,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breaks_are_sorted_and_refine_towards_zero() {
        let b = breaks(PI, 0.01);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), PI);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b[1] < 0.03);
        assert!(breaks(PI, 0.0).len() <= MAX_BREAKS + 2);
    }

    #[test]
    fn quarter_zone_only_for_symmetric_shifts() {
        let mk = |c| Lattice2DPairConfig::new(1.0, 1.0, c, 0.1).unwrap();
        assert!(quarter_zone(&mk([0.0, 0.5])));
        assert!(!quarter_zone(&mk([0.3, 0.0])));
    }
}
