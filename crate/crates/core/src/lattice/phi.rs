//! Renormalized scattering functions `phi~ = 1/g + J1 / (4 pi)`.

use std::f64::consts::PI;

use super::{j1_lattice_sum_1d, sums::j1_split, ChainPairConfig, Lattice2DPairConfig, TruncationSpec};
use crate::error::{Error, Result};

/// Relative floor below which `phi~` counts as a zero crossing.
const GUARD: f64 = 1e-12;

pub(crate) fn guard(phi: f64, xi: f64, q: &[f64], g: f64) -> Result<f64> {
    if phi.abs() < GUARD / g || !phi.is_finite() {
        return Err(Error::Singularity {
            xi,
            q: q.to_vec(),
            value: phi,
        });
    }
    Ok(phi)
}

/// `phi~(xi, k1) = 1/g - ln(1 + exp(-2 xi a) - 2 cos(k1 a) exp(-xi a)) / (4 pi a)` for a chain.
pub fn phi_tilde_1d(xi: f64, k1: f64, cfg: &ChainPairConfig) -> Result<f64> {
    let j1 = j1_lattice_sum_1d(xi, k1, cfg.a)?;
    guard(1.0 / cfg.g + j1 / (4.0 * PI), xi, &[k1], cfg.g)
}

/// `phi~(xi, k) = 1/g + J1(xi, k) / (4 pi)` for a square lattice.
pub fn phi_tilde_2d(xi: f64, k: [f64; 2], cfg: &Lattice2DPairConfig, trunc: &TruncationSpec) -> Result<f64> {
    trunc.validate()?;
    let (j1, _) = j1_split(xi, k, cfg.a, trunc)?;
    guard(1.0 / cfg.g + j1.total() / (4.0 * PI), xi, &k, cfg.g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_value_at_zone_edge() {
        let cfg = ChainPairConfig::new(1.0, 1.0, 0.0, 0.1).unwrap();
        let v = phi_tilde_1d(0.0, PI, &cfg).unwrap();
        assert!((v - (10.0 - 4f64.ln() / (4.0 * PI))).abs() < 1e-13);
    }

    #[test]
    fn free_limit_at_large_frequency() {
        let chain = ChainPairConfig::new(1.0, 1.0, 0.0, 0.1).unwrap();
        assert!((phi_tilde_1d(60.0, 0.3, &chain).unwrap() - 10.0).abs() < 1e-20_f64.max(1e-14));
        let lat = Lattice2DPairConfig::new(1.0, 1.0, [0.0, 0.0], 0.1).unwrap();
        let v = phi_tilde_2d(60.0, [0.3, 0.2], &lat, &TruncationSpec::default()).unwrap();
        assert!((v - 10.0).abs() < 1e-14);
    }

    #[test]
    fn lattice_zero_mode_dominates_near_origin() {
        // 2 gamma phi~ -> 1/a^2 as gamma -> 0 with the Euclidean sign
        let a = 1.5;
        let lat = Lattice2DPairConfig::new(a, 1.0, [0.0, 0.0], 0.1).unwrap();
        let t = TruncationSpec::default();
        let mut last = f64::INFINITY;
        for &gamma in &[1e-2, 1e-4, 1e-6] {
            let (xi, k) = (0.6 * gamma, [0.8 * gamma, 0.0]);
            let v = phi_tilde_2d(xi, k, &lat, &t).unwrap();
            let dev = (2.0 * gamma * v * a * a - 1.0).abs();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn lattice_is_even_in_k() {
        let lat = Lattice2DPairConfig::new(1.0, 1.0, [0.0, 0.0], 0.1).unwrap();
        let t = TruncationSpec::default();
        for &xi in &[0.1, 3.0] {
            let p = phi_tilde_2d(xi, [0.7, -1.2], &lat, &t).unwrap();
            let m = phi_tilde_2d(xi, [-0.7, 1.2], &lat, &t).unwrap();
            assert!((p - m).abs() < 1e-12 * p.abs());
        }
    }

    #[test]
    fn positive_in_the_small_coupling_regime() {
        for &g in &[0.01, 0.05, 0.1] {
            let cfg = ChainPairConfig::new(1.0, 1.0, 0.0, g).unwrap();
            assert!(1.0 / g > 4f64.ln() / (4.0 * PI));
            for &xi in &[1e-6, 0.1, 1.0] {
                for &q in &[0.0, 1.0, PI] {
                    assert!(phi_tilde_1d(xi, q, &cfg).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_crossing_is_reported() {
        // J1 at the zone corner is negative; a large coupling drives phi~ through zero
        let t = TruncationSpec::default();
        let j1 = super::super::j1_lattice_sum(0.0, [PI, PI], 1.0, &t).unwrap();
        assert!(j1 < 0.0);
        let g = -4.0 * PI / j1;
        let lat = Lattice2DPairConfig::new(1.0, 1.0, [0.0, 0.0], g).unwrap();
        match phi_tilde_2d(0.0, [PI, PI], &lat, &t) {
            Err(Error::Singularity { .. }) => {}
            other => panic!("expected singularity, got {other:?}"),
        }
    }
}
