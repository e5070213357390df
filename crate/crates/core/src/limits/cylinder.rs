use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numerics::bessel::{ln_bessel_i_seq, ln_bessel_k_seq};
use crate::numerics::quadrature::{semiinfinite, GaussLegendre};
use crate::numerics::QuadratureSpec;
use crate::tgtg::log_det_one_minus;

const LMAX_DEFAULT: usize = 10;
const LMAX_CAP: usize = 320;
const LMAX_REL_CHANGE: f64 = 1e-4;

/// Two parallel cylindrical shells of radius `radius`, axes `d` apart, each
/// carrying a delta potential of strength `g` (inverse length, so `g R` is
/// dimensionless). `g = inf` is the Dirichlet limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPairConfig {
    pub radius: f64,
    pub d: f64,
    pub g: f64,
    /// Partial waves `|l| <= lmax` kept in the determinant.
    pub lmax: usize,
}

impl CylinderPairConfig {
    pub fn new(radius: f64, d: f64, g: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
        }
        if !(d > 2.0 * radius && d.is_finite()) {
            return Err(Error::InvalidConfig(format!("cylinders overlap: d={d}, radius={radius}")));
        }
        if !(g > 0.0) {
            return Err(Error::InvalidConfig(format!("g must be positive, got {g}")));
        }
        Ok(Self {
            radius,
            d,
            g,
            lmax: LMAX_DEFAULT,
        })
    }

    pub fn with_lmax(mut self, lmax: usize) -> Self {
        self.lmax = lmax;
        self
    }

    /// Leading large-separation value `-1 / (8 pi d^2 ln^2(R/d))`.
    pub fn asymptote(&self) -> f64 {
        let l = (self.radius / self.d).ln();
        -1.0 / (8.0 * PI * self.d * self.d * l * l)
    }
}

/// Energy per unit length with the partial-wave cutoff that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderEnergy {
    pub value: f64,
    pub lmax: usize,
    /// Whether the last doubling of `lmax` changed the value by less than `1e-4`.
    pub converged: bool,
}

/// `ln det(1 - M(xi))` with `M = N N`, `N_{l l'} = K_{l+l'}(xi d) T_{l'}` and
/// `T_l = g R I_l^2 / (1 + g R I_l K_l)` at argument `xi R`.
///
/// `N = K T` with symmetric `K` and diagonal `T > 0`, so `M` is similar to
/// `A^2` with the symmetric `A = T^{1/2} K T^{1/2}`, assembled in log space.
fn log_det(xi: f64, cfg: &CylinderPairConfig) -> Result<f64> {
    let n = cfg.lmax;
    let x = xi * cfg.radius;
    let ln_i = ln_bessel_i_seq(n, x);
    let ln_k = ln_bessel_k_seq(n, x);
    let ln_kd = ln_bessel_k_seq(2 * n, xi * cfg.d);
    let inv_gr = 1.0 / (cfg.g * cfg.radius);
    let half_ln_t: Vec<f64> = (0..=n)
        .map(|l| ln_i[l] - 0.5 * (inv_gr + (ln_i[l] + ln_k[l]).exp()).ln())
        .collect();
    let size = 2 * n + 1;
    let idx = |i: usize| (i as i64 - n as i64).unsigned_abs() as usize;
    let a = DMatrix::from_fn(size, size, |i, j| {
        let (li, lj) = (i as i64 - n as i64, j as i64 - n as i64);
        let order = (li + lj).unsigned_abs() as usize;
        (half_ln_t[idx(i)] + half_ln_t[idx(j)] + ln_kd[order]).exp()
    });
    let m = &a * &a;
    log_det_one_minus(&m).ok_or(Error::Validity {
        xi,
        q: Vec::new(),
        h2: 1.0,
    })
}

/// Energy per unit length at the fixed cutoff `cfg.lmax`,
/// `(1/4pi) int_0^inf dxi xi ln det(1 - M)`.
pub fn cylinder_energy_fixed_lmax(cfg: &CylinderPairConfig, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let f = |xi: f64| -> Result<f64> {
        if xi * cfg.d > 1400.0 {
            return Ok(0.0);
        }
        Ok(xi * log_det(xi, cfg)?)
    };
    let rule = GaussLegendre::new(quad.xi_order);
    let est = semiinfinite(&rule, &f, quad, 1.0 / cfg.d, false, &[])?;
    Ok(est.value / (4.0 * PI))
}

/// Energy per unit length, doubling `lmax` from `cfg.lmax` until the relative
/// change drops below `1e-4`.
pub fn cylinder_energy_per_length(cfg: &CylinderPairConfig, quad: &QuadratureSpec) -> Result<CylinderEnergy> {
    let mut current = *cfg;
    let mut value = cylinder_energy_fixed_lmax(&current, quad)?;
    loop {
        let next_lmax = (2 * current.lmax).max(current.lmax + 1);
        if next_lmax > LMAX_CAP {
            return Ok(CylinderEnergy {
                value,
                lmax: current.lmax,
                converged: false,
            });
        }
        let next = current.with_lmax(next_lmax);
        let v = cylinder_energy_fixed_lmax(&next, quad)?;
        let change = ((v - value) / v).abs();
        current = next;
        value = v;
        if change < LMAX_REL_CHANGE || v == 0.0 {
            return Ok(CylinderEnergy {
                value,
                lmax: current.lmax,
                converged: true,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{bessel_i, bessel_k};

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default().with_orders(32, 32).with_tol(1e-8)
    }

    #[test]
    fn s_wave_determinant_is_scalar() {
        let cfg = CylinderPairConfig::new(0.1, 1.0, 3.0).unwrap().with_lmax(0);
        let xi = 0.7;
        let (i0, k0) = (bessel_i(0, xi * 0.1).unwrap(), bessel_k(0, xi * 0.1).unwrap());
        let gr = 0.3;
        let n = gr * bessel_k(0, xi).unwrap() * i0 * i0 / (1.0 + gr * i0 * k0);
        let expected = (1.0 - n * n).ln();
        assert!((log_det(xi, &cfg).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn weak_coupling_is_quadratic() {
        let e = |g: f64| {
            let cfg = CylinderPairConfig::new(0.1, 1.0, g).unwrap().with_lmax(4);
            cylinder_energy_fixed_lmax(&cfg, &quad()).unwrap()
        };
        let (e1, e2) = (e(1e-5), e(2e-5));
        assert!(e1 < 0.0);
        assert!((e2 / e1 - 4.0).abs() < 1e-3);
    }

    #[test]
    fn partial_waves_converge() {
        let cfg = CylinderPairConfig::new(0.1, 1.0, f64::INFINITY).unwrap();
        let e8 = cylinder_energy_fixed_lmax(&cfg.with_lmax(8), &quad()).unwrap();
        let e10 = cylinder_energy_fixed_lmax(&cfg.with_lmax(10), &quad()).unwrap();
        assert!(((e10 - e8) / e10).abs() < 1e-4);
        let auto = cylinder_energy_per_length(&cfg, &quad()).unwrap();
        assert!(auto.converged && auto.lmax == 20);
        assert!(((auto.value - e10) / e10).abs() < 1e-4);
    }

    #[test]
    fn dirichlet_is_the_strong_coupling_limit() {
        let e = |g: f64| {
            let cfg = CylinderPairConfig::new(0.1, 1.0, g).unwrap().with_lmax(6);
            cylinder_energy_fixed_lmax(&cfg, &quad()).unwrap()
        };
        let dirichlet = e(f64::INFINITY);
        let strong = e(1e9);
        assert!(((strong - dirichlet) / dirichlet).abs() < 1e-6);
        assert!(e(10.0) > dirichlet);
    }

    #[test]
    fn rejects_overlap() {
        assert!(CylinderPairConfig::new(0.5, 1.0, 1.0).is_err());
        assert!(CylinderPairConfig::new(0.1, 1.0, 0.0).is_err());
    }
}
