//! Round-trip kernels `h = S / phi~` in momentum space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{pair_2d, phi_tilde_1d, screened_split_1d, ChainPairConfig, Lattice2DPairConfig, TruncationSpec};

/// `h(i xi, q)` together with `ln(1 - |h|^2)` evaluated without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct KernelValue {
    pub h: Complex64,
    pub h2: f64,
    pub log_factor: f64,
}

fn finish(xi: f64, q: &[f64], phi: f64, s: Complex64, phi_minus_s: f64) -> Result<KernelValue> {
    let s_abs = s.norm();
    let h = s / phi;
    let h2 = (s_abs / phi).powi(2);
    let one_minus = phi_minus_s / phi * ((phi + s_abs) / phi);
    if !(h2 < 1.0) || !(one_minus > 0.0) {
        return Err(Error::Validity { xi, q: q.to_vec(), h2 });
    }
    let log_factor = if h2 < 0.5 { (-h2).ln_1p() } else { one_minus.ln() };
    Ok(KernelValue { h, h2, log_factor })
}

pub(crate) fn eval_1d(xi: f64, q: f64, cfg: &ChainPairConfig, trunc: &TruncationSpec) -> Result<KernelValue> {
    let phi = phi_tilde_1d(xi, q, cfg)?;
    let s = screened_split_1d(xi, q, cfg, trunc)?;
    finish(xi, &[q], phi, s, phi - s.norm())
}

pub(crate) fn eval_2d(xi: f64, q: [f64; 2], cfg: &Lattice2DPairConfig, trunc: &TruncationSpec) -> Result<KernelValue> {
    let p = pair_2d(xi, q, cfg, trunc)?;
    let phi = p.phi.total();
    let s = p.s.total();
    let phi_minus_s = if p.s.zero > 0.0 {
        let s0 = p.s.zero;
        let r = p.s.rest;
        let excess = (2.0 * s0 * r.re + r.norm_sqr()) / (s.norm() + s0);
        p.zero_gap + p.phi.rest - excess
    } else {
        phi - s.norm()
    };
    finish(xi, &q, phi, s, phi_minus_s)
}

/// Round-trip kernel between two chains,
/// `h = (2 pi a)^-1 sum_N K0(b gamma_N) exp(i 2 pi N c / a) / phi~(q)`.
///
/// As `a -> inf` its magnitude tends to `g exp(-xi d) / (4 pi d)`, the
/// two-scatterer value, which fixes the overall constant.
pub fn kernel_h_1d(xi: f64, q: f64, cfg: &ChainPairConfig, trunc: &TruncationSpec) -> Result<Complex64> {
    trunc.validate()?;
    Ok(eval_1d(xi, q, cfg, trunc)?.h)
}

/// Round-trip kernel between two square lattices,
/// `h = a^-2 sum_G exp(-gamma_G b + i G.c) / (2 gamma_G phi~(q))`.
pub fn kernel_h_2d(xi: f64, q: [f64; 2], cfg: &Lattice2DPairConfig, trunc: &TruncationSpec) -> Result<Complex64> {
    trunc.validate()?;
    Ok(eval_2d(xi, q, cfg, trunc)?.h)
}
