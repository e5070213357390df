//! Lattice geometry, couplings and the renormalized scattering functions.
//!
//! All lengths share one unit; inverse lengths (frequencies, momenta,
//! energies per cell) are in the reciprocal unit.
//!
//! Sign convention: on the imaginary frequency axis the free Green's function
//! is `G(r) = exp(-xi r) / (4 pi r) > 0` and the scattering matrix of a set of
//! point scatterers is `Phi = 1/g + G(a_n - a_m)` (off-diagonal). Its lattice
//! Fourier transform is `phi~(q) = 1/g + J1(xi, q) / (4 pi)`.

mod phi;
mod sums;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;

pub use phi::{phi_tilde_1d, phi_tilde_2d};
pub use sums::{j1_lattice_sum, j1_lattice_sum_1d, screened_sum_1d, screened_sum_2d};
pub(crate) use sums::{pair_2d, screened_split_1d};

fn reduce(c: f64, a: f64) -> f64 {
    let r = c.rem_euclid(a);
    // rem_euclid may round up to `a` for tiny negative inputs
    if r >= a {
        0.0
    } else {
        r
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Two parallel chains along `x`, separated by `b` along `z`, the second shifted
/// by `c` along the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPairConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub g: f64,
}

impl ChainPairConfig {
    pub fn new(a: f64, b: f64, c: f64, g: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        check_positive("g", g)?;
        if !c.is_finite() {
            return Err(Error::InvalidConfig(format!("c must be finite, got {c}")));
        }
        Ok(Self { a, b, c: reduce(c, a), g })
    }

    /// Distance between the closest scatterers of the two chains.
    pub fn d(&self) -> f64 {
        let c = self.c.min(self.a - self.c);
        self.b.hypot(c)
    }
}

/// Two parallel square lattices in the `xy` plane, separated by `b` along `z`,
/// the second shifted in-plane by `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice2DPairConfig {
    pub a: f64,
    pub b: f64,
    pub c: [f64; 2],
    pub g: f64,
}

impl Lattice2DPairConfig {
    pub fn new(a: f64, b: f64, c: [f64; 2], g: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        check_positive("g", g)?;
        if !c.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidConfig(format!("c must be finite, got {c:?}")));
        }
        Ok(Self {
            a,
            b,
            c: [reduce(c[0], a), reduce(c[1], a)],
            g,
        })
    }

    pub fn d(&self) -> f64 {
        let c0 = self.c[0].min(self.a - self.c[0]);
        let c1 = self.c[1].min(self.a - self.c[1]);
        self.b.hypot(c0.hypot(c1))
    }
}

/// Configurations whose displacement can be folded into the unit cell.
pub trait Displaced: Sized {
    fn reduce_displacement(self) -> Self;
}

impl Displaced for ChainPairConfig {
    fn reduce_displacement(mut self) -> Self {
        self.c = reduce(self.c, self.a);
        self
    }
}

impl Displaced for Lattice2DPairConfig {
    fn reduce_displacement(mut self) -> Self {
        self.c = [reduce(self.c[0], self.a), reduce(self.c[1], self.a)];
        self
    }
}

/// Fold the lateral displacement into `[0, a)` per component.
pub fn reduce_displacement<C: Displaced>(cfg: C) -> C {
    cfg.reduce_displacement()
}

/// How lattice sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumMethod {
    /// Direct real-space sums where their tail bound allows, Ewald otherwise.
    #[default]
    Auto,
    /// Truncated real-space sums only; refused at `xi = 0`.
    Direct,
    /// Gaussian (Ewald) split for every frequency.
    Ewald,
}

/// Truncation of the infinite lattice sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    /// Largest real-space shell `|n_i| <= n_direct` used by direct sums.
    pub n_direct: usize,
    /// Minimum reciprocal index range `|N_i| <= n_recip`; extended as needed
    /// to meet `tail_tol`.
    pub n_recip: usize,
    /// Gaussian split parameter; `sqrt(pi) / a` when unset, which balances the
    /// real-space and reciprocal term counts.
    pub ewald_split: Option<f64>,
    /// Relative tail tolerance of every lattice sum.
    pub tail_tol: f64,
    pub method: SumMethod,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self {
            n_direct: 16,
            n_recip: 8,
            ewald_split: None,
            tail_tol: 1e-8,
            method: SumMethod::Auto,
        }
    }
}

impl TruncationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_direct < 1 || self.n_recip < 1 {
            return Err(Error::InvalidConfig("n_direct and n_recip must be >= 1".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tail_tol must lie in (0, 1), got {}",
                self.tail_tol
            )));
        }
        if let Some(eta) = self.ewald_split {
            check_positive("ewald_split", eta)?;
        }
        Ok(())
    }

    pub(crate) fn eta(&self, a: f64) -> f64 {
        self.ewald_split.unwrap_or(PI.sqrt() / a)
    }

    /// `ln(1/tail_tol)` plus a safety margin, the exponent budget of all cutoffs.
    pub(crate) fn log_budget(&self) -> f64 {
        -self.tail_tol.ln() + 3.0
    }
}

/// Truncation and quadrature settings of one energy evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericsSpec {
    pub truncation: TruncationSpec,
    pub quadrature: QuadratureSpec,
    /// Evaluate quadrature nodes on the rayon pool.
    pub parallel: bool,
}

impl NumericsSpec {
    pub fn chain() -> Self {
        Self {
            truncation: TruncationSpec::default(),
            quadrature: QuadratureSpec::default(),
            parallel: true,
        }
    }

    pub fn lattice2d() -> Self {
        Self {
            truncation: TruncationSpec::default(),
            quadrature: QuadratureSpec::default().with_orders(64, 32),
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.truncation.validate()?;
        self.quadrature.validate()
    }
}

/// Split of a momentum `k` into a Brillouin-zone part and a reciprocal index:
/// `k = q + (2 pi / a) N`, `q` in `[-pi/a, pi/a)` per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumDecomposition<const D: usize> {
    pub xi: f64,
    pub q: [f64; D],
    pub n: [i64; D],
    pub k: [f64; D],
    pub gamma: f64,
}

impl<const D: usize> MomentumDecomposition<D> {
    pub fn new(xi: f64, k: [f64; D], a: f64) -> Self {
        let period = 2.0 * PI / a;
        let mut q = [0.0; D];
        let mut n = [0; D];
        for i in 0..D {
            let m = ((k[i] + 0.5 * period) / period).floor();
            n[i] = m as i64;
            q[i] = k[i] - m * period;
        }
        let k2: f64 = k.iter().map(|x| x * x).sum();
        Self {
            xi,
            q,
            n,
            k,
            gamma: (xi * xi + k2).sqrt(),
        }
    }

    /// Same quasi-momentum shifted by the reciprocal vector `N`.
    pub fn shifted(xi: f64, q: [f64; D], n: [i64; D], a: f64) -> Self {
        let period = 2.0 * PI / a;
        let mut k = [0.0; D];
        for i in 0..D {
            k[i] = q[i] + period * n[i] as f64;
        }
        let k2: f64 = k.iter().map(|x| x * x).sum();
        Self {
            xi,
            q,
            n,
            k,
            gamma: (xi * xi + k2).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displacement_reduction() {
        let f = |c: f64| ChainPairConfig::new(1.0, 1.0, c, 0.1).unwrap().c;
        assert_eq!(f(1.0), 0.0);
        assert!((f(1.3) - 0.3).abs() < 1e-15);
        assert!((f(-0.2) - 0.8).abs() < 1e-15);
        assert_eq!(f(-1e-18), 0.0);
        let l = Lattice2DPairConfig::new(2.0, 1.0, [2.0, -0.5], 0.1).unwrap();
        assert_eq!(l.c, [0.0, 1.5]);
        let raw = ChainPairConfig { a: 1.0, b: 1.0, c: 2.25, g: 0.1 };
        assert_eq!(reduce_displacement(raw).c, 0.25);
    }

    #[test]
    fn closest_distance() {
        let cfg = ChainPairConfig::new(1.0, 0.3, 0.9, 0.1).unwrap();
        assert!((cfg.d() - 0.3f64.hypot(0.1)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(ChainPairConfig::new(0.0, 1.0, 0.0, 0.1).is_err());
        assert!(ChainPairConfig::new(1.0, -1.0, 0.0, 0.1).is_err());
        assert!(Lattice2DPairConfig::new(1.0, 1.0, [f64::NAN, 0.0], 0.1).is_err());
        let t = TruncationSpec { tail_tol: 1.0, ..Default::default() };
        assert!(t.validate().is_err());
    }

    #[test]
    fn momentum_folding() {
        let a = 2.0;
        let m = MomentumDecomposition::new(0.5, [3.0 * PI / a + 0.1], a);
        assert_eq!(m.n, [2]);
        assert!((m.q[0] - (-PI / a + 0.1)).abs() < 1e-12);
        let back = MomentumDecomposition::shifted(0.5, m.q, m.n, a);
        assert!((back.k[0] - m.k[0]).abs() < 1e-12);
        assert!(m.gamma >= m.xi);
    }
}
