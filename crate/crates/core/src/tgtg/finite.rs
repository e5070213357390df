//! Position-space TGTG determinant for explicit, finite sets of scatterers:
//! `E = (1/2pi) int dxi ln det(1 - Phi_A^-1 G_AB Phi_B^-1 G_BA)`.
//!
//! With `Phi = L L^T` the operator is similar to `K K^T`, `K = L_A^-1 G_AB L_B^-T`,
//! so the determinant comes from one more Cholesky factorization of the
//! symmetric matrix `1 - K K^T`, which also certifies `|K| < 1`.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};
use crate::lattice::ChainPairConfig;
use crate::numerics::quadrature::{semiinfinite, GaussLegendre};
use crate::numerics::QuadratureSpec;

pub type Site = [f64; 3];

/// Two explicit sets of scatterers sharing a coupling `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLatticeSpec {
    pub sites_a: Vec<Site>,
    pub sites_b: Vec<Site>,
    pub g: f64,
}

fn dist(p: &Site, q: &Site) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

fn green(xi: f64, r: f64) -> f64 {
    (-xi * r).exp() / (4.0 * PI * r)
}

impl FiniteLatticeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sites_a.is_empty() || self.sites_b.is_empty() {
            return Err(Error::InvalidConfig("site lists must be non-empty".into()));
        }
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidConfig(format!("g must be positive, got {}", self.g)));
        }
        let all: Vec<&Site> = self.sites_a.iter().chain(&self.sites_b).collect();
        if all.iter().any(|s| s.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidConfig("site coordinates must be finite".into()));
        }
        for i in 0..all.len() {
            for j in 0..i {
                if dist(all[i], all[j]) == 0.0 {
                    return Err(Error::InvalidConfig(format!("coincident sites {:?}", all[i])));
                }
            }
        }
        Ok(())
    }

    /// Smallest distance between a site of `A` and a site of `B`.
    pub fn gap(&self) -> f64 {
        self.sites_a
            .iter()
            .flat_map(|p| self.sites_b.iter().map(move |q| dist(p, q)))
            .fold(f64::INFINITY, f64::min)
    }

    fn phi(&self, xi: f64, sites: &[Site]) -> Result<DMatrix<f64>> {
        let n = sites.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0 / self.g
            } else {
                green(xi, dist(&sites[i], &sites[j]))
            }
        });
        let chol = Cholesky::new(m)
            .ok_or_else(|| Error::Matrix(format!("scattering matrix not positive definite at xi={xi:e}")))?;
        Ok(chol.unpack())
    }

    /// `ln det(1 - Phi_A^-1 G_AB Phi_B^-1 G_BA)` at frequency `xi`.
    pub fn log_det(&self, xi: f64) -> Result<f64> {
        let la = self.phi(xi, &self.sites_a)?;
        let lb = self.phi(xi, &self.sites_b)?;
        let g = DMatrix::from_fn(self.sites_a.len(), self.sites_b.len(), |i, j| {
            green(xi, dist(&self.sites_a[i], &self.sites_b[j]))
        });
        let singular = || Error::Matrix("triangular factor is singular".into());
        let x = la.solve_lower_triangular(&g).ok_or_else(singular)?;
        let k = lb.solve_lower_triangular(&x.transpose()).ok_or_else(singular)?;
        // k holds K^T; use the smaller Gram matrix
        let gram = if k.nrows() <= k.ncols() {
            &k * k.transpose()
        } else {
            k.transpose() * &k
        };
        log_det_one_minus(&gram).ok_or(Error::Validity {
            xi,
            q: Vec::new(),
            h2: 1.0,
        })
    }
}

/// `ln det(1 - X)` for symmetric positive semi-definite `X`, by a Cholesky
/// factorization of `1 - X` that tracks `1 - L_jj^2` directly, so that
/// near-identity determinants keep full relative accuracy.
pub(crate) fn log_det_one_minus(x: &DMatrix<f64>) -> Option<f64> {
    let n = x.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let mut acc = 0.0;
    for j in 0..n {
        let row_j = l.row(j);
        let delta = x[(j, j)] + row_j.columns(0, j).iter().map(|v| v * v).sum::<f64>();
        if !(delta < 1.0) {
            return None;
        }
        acc += (-delta).ln_1p();
        let d = (1.0 - delta).sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = -x[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(acc)
}

/// Interaction energy of two finite sets of scatterers.
pub fn finite_lattice_energy(spec: &FiniteLatticeSpec, quad: &QuadratureSpec, parallel: bool) -> Result<f64> {
    spec.validate()?;
    quad.validate()?;
    let rule = GaussLegendre::new(quad.xi_order);
    let f = |xi: f64| spec.log_det(xi);
    let est = semiinfinite(&rule, &f, quad, 1.0 / spec.gap(), parallel, &[])?;
    Ok(est.value / (2.0 * PI))
}

/// Segments of `n` sites cut from the two chains of `cfg`, centred on the origin.
pub fn chain_segments(cfg: &ChainPairConfig, n: usize) -> FiniteLatticeSpec {
    let mid = 0.5 * (n as f64 - 1.0);
    let x = |i: usize| (i as f64 - mid) * cfg.a;
    FiniteLatticeSpec {
        sites_a: (0..n).map(|i| [x(i), 0.0, 0.0]).collect(),
        sites_b: (0..n).map(|i| [x(i) + cfg.c, 0.0, cfg.b]).collect(),
        g: cfg.g,
    }
}

/// Value at `1/N = 0` of the polynomial in `1/N` through the points `(N, e_N)`.
pub fn richardson_in_inverse_n(points: &[(usize, f64)]) -> f64 {
    // Neville's scheme evaluated at x = 0
    let x: Vec<f64> = points.iter().map(|p| 1.0 / p.0 as f64).collect();
    let mut p: Vec<f64> = points.iter().map(|p| p.1).collect();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            p[i] = (x[j] * p[i] - x[i] * p[i + 1]) / (x[j] - x[i]);
        }
    }
    p[0]
}
