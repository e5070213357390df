use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::lattice::{ChainPairConfig, Lattice2DPairConfig};
use crate::numerics::quadrature::{semiinfinite, GaussLegendre};
use crate::numerics::{bessel_i_half_scaled, bessel_k_half_scaled, dilog, Neumaier, QuadratureSpec};

fn coupling_ratio(function: &'static str, g: f64, d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(domain(function, format!("separation must be positive, got {d}")));
    }
    if !g.is_finite() {
        return Err(domain(function, format!("g must be finite, got {g}")));
    }
    let x = g / (4.0 * PI * d);
    if x.abs() >= 1.0 {
        return Err(Error::Validity {
            xi: 0.0,
            q: Vec::new(),
            h2: x * x,
        });
    }
    Ok(x)
}

/// Casimir-Polder energy of two point scatterers, `-(1/4 pi d) Li2((g/4 pi d)^2)`.
pub fn casimir_polder_closed(g: f64, d: f64) -> Result<f64> {
    let x = coupling_ratio("casimir_polder_closed", g, d)?;
    Ok(-dilog(x * x)? / (4.0 * PI * d))
}

/// The same energy as the frequency integral `(1/2pi) int dxi ln(1 - x^2 e^{-2 xi d})`.
pub fn casimir_polder_two_point(g: f64, d: f64, quad: &QuadratureSpec) -> Result<f64> {
    let x = coupling_ratio("casimir_polder_two_point", g, d)?;
    quad.validate()?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let x2 = x * x;
    let f = |xi: f64| Ok((-x2 * (-2.0 * xi * d).exp()).ln_1p());
    let rule = GaussLegendre::new(quad.xi_order);
    let est = semiinfinite(&rule, &f, quad, 1.0 / d, false, &[])?;
    Ok(est.value / (2.0 * PI))
}

/// `dE/dr` of the Casimir-Polder energy at separation `r`, positive since the
/// energy rises towards zero with distance.
pub fn casimir_polder_slope(g: f64, r: f64) -> Result<f64> {
    let x = coupling_ratio("casimir_polder_slope", g, r)?;
    let y = x * x;
    Ok((dilog(y)? - 2.0 * (-y).ln_1p()) / (4.0 * PI * r * r))
}

fn check_terms(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(domain("pairwise", format!("separation must be positive, got {b}")))
    }
}

/// Sum of Casimir-Polder energies between one scatterer of the first chain
/// and the sites `|n| <= n_terms` of the second, at `r_n = sqrt(b^2 + (na - c)^2)`.
pub fn pairwise_energy_chain(cfg: &ChainPairConfig, n_terms: usize) -> Result<f64> {
    check_terms(cfg.b)?;
    let n = n_terms as i64;
    let mut acc = Neumaier::new();
    // far terms first
    for m in (0..=n).rev() {
        for s in if m == 0 { vec![0] } else { vec![m, -m] } {
            let r = cfg.b.hypot(s as f64 * cfg.a - cfg.c);
            acc.add(casimir_polder_closed(cfg.g, r)?);
        }
    }
    Ok(acc.value())
}

/// Double sum over `|n1|, |n2| <= n_terms` for two square lattices.
pub fn pairwise_energy_lattice2d(cfg: &Lattice2DPairConfig, n_terms: usize) -> Result<f64> {
    check_terms(cfg.b)?;
    let n = n_terms as i64;
    let mut acc = Neumaier::new();
    for n1 in -n..=n {
        let x = n1 as f64 * cfg.a - cfg.c[0];
        for n2 in -n..=n {
            let y = n2 as f64 * cfg.a - cfg.c[1];
            let r = (cfg.b * cfg.b + x * x + y * y).sqrt();
            acc.add(casimir_polder_closed(cfg.g, r)?);
        }
    }
    Ok(acc.value())
}

/// Normal force on one scatterer at height `z` above the second chain,
/// `sum_n F_n cos(phi_n)` with `F_n = -dE/dr` and `cos(phi_n) = z / r_n`.
pub fn pairwise_force_chain(cfg: &ChainPairConfig, z: f64, n_terms: usize) -> Result<f64> {
    check_terms(z)?;
    let n = n_terms as i64;
    let mut acc = Neumaier::new();
    for m in (0..=n).rev() {
        for s in if m == 0 { vec![0] } else { vec![m, -m] } {
            let r = z.hypot(s as f64 * cfg.a - cfg.c);
            acc.add(-casimir_polder_slope(cfg.g, r)? * z / r);
        }
    }
    Ok(acc.value())
}

/// Two spheres of radius `radius` carrying delta potentials of (unrenormalized)
/// strength `g`, with centres `d` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConfig {
    pub radius: f64,
    pub d: f64,
    pub g: f64,
}

impl SphereConfig {
    pub fn new(radius: f64, d: f64, g: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
        }
        if !(d > 2.0 * radius && d.is_finite()) {
            return Err(Error::InvalidConfig(format!("spheres overlap: d={d}, radius={radius}")));
        }
        if !g.is_finite() {
            return Err(Error::InvalidConfig(format!("g must be finite, got {g}")));
        }
        Ok(Self { radius, d, g })
    }
}

/// Inverse scattering function of a single sphere in partial wave `l`:
/// `(-g R / 4 pi) / (1 + (g / 4 pi R^2) I_{l+1/2}(xi R) K_{l+1/2}(xi R))`.
pub fn sphere_phi_inverse(xi: f64, l: u32, cfg: &SphereConfig) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(domain("sphere_phi_inverse", format!("xi must be positive, got {xi}")));
    }
    let x = xi * cfg.radius;
    // the exponential scalings of I and K cancel in the product
    let ik = bessel_i_half_scaled(l, x)? * bessel_k_half_scaled(l, x)?;
    let den = 1.0 + cfg.g / (4.0 * PI * cfg.radius * cfg.radius) * ik;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::Singularity {
            xi,
            q: vec![l as f64],
            value: den,
        });
    }
    Ok(-cfg.g * cfg.radius / (4.0 * PI) / den)
}

/// Large-separation energy of two delta spheres. Only the s-wave survives and
/// the radius drops out, leaving the two-point Casimir-Polder energy.
pub fn sphere_large_separation_energy(g: f64, d: f64, quad: &QuadratureSpec) -> Result<f64> {
    casimir_polder_two_point(g, d, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate_finite;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default().with_orders(32, 32).with_tol(1e-12)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let e = casimir_polder_two_point(0.1, 1.0, &quad()).unwrap();
        assert!(rel(e, casimir_polder_closed(0.1, 1.0).unwrap()) < 1e-10);
        assert_eq!(casimir_polder_two_point(0.0, 1.0, &quad()).unwrap(), 0.0);
    }

    #[test]
    fn weak_coupling_leading_term() {
        let d: f64 = 2.0;
        let mut last = f64::INFINITY;
        for &g in &[1.0, 0.1, 0.01] {
            let lead = -g * g / (64.0 * PI.powi(3) * d.powi(3));
            let dev = rel(casimir_polder_closed(g, d).unwrap(), lead);
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn validity_bound() {
        let g = 4.0 * PI;
        assert!(matches!(casimir_polder_closed(g, 1.0), Err(Error::Validity { .. })));
        assert!(casimir_polder_two_point(g, 0.5, &quad()).is_err());
    }

    #[test]
    fn slope_is_the_derivative() {
        let (g, r, h) = (2.0, 0.5, 1e-5);
        let fd = (casimir_polder_closed(g, r + h).unwrap() - casimir_polder_closed(g, r - h).unwrap()) / (2.0 * h);
        let s = casimir_polder_slope(g, r).unwrap();
        assert!(s > 0.0 && rel(s, fd) < 1e-8);
    }

    #[test]
    fn sparse_pairwise_is_the_nearest_pair() {
        let cfg = ChainPairConfig::new(1.0, 0.05, 0.0, 0.1).unwrap();
        let pw = pairwise_energy_chain(&cfg, 1000).unwrap();
        let cp = casimir_polder_closed(0.1, 0.05).unwrap();
        assert!(rel(pw, cp) < 1e-2);
        let far = ChainPairConfig::new(1e4, 1.0, 0.0, 0.1).unwrap();
        let cp = casimir_polder_closed(0.1, 1.0).unwrap();
        assert!(rel(pairwise_energy_chain(&far, 100).unwrap(), cp) < 1e-10);
    }

    #[test]
    fn pairwise_tail_converges() {
        let cfg = ChainPairConfig::new(1.0, 1.0, 0.0, 0.1).unwrap();
        let e1 = pairwise_energy_chain(&cfg, 1000).unwrap();
        let e2 = pairwise_energy_chain(&cfg, 2000).unwrap();
        assert!(rel(e2, e1) < 1e-6);
    }

    #[test]
    fn lattice_sum_reduces_to_chain_when_sparse() {
        let chain = ChainPairConfig::new(1.0, 0.05, 0.0, 0.1).unwrap();
        let lat = Lattice2DPairConfig::new(1.0, 0.05, [0.0, 0.0], 0.1).unwrap();
        let e1 = pairwise_energy_chain(&chain, 50).unwrap();
        let e2 = pairwise_energy_lattice2d(&lat, 50).unwrap();
        assert!(e2 < e1 && rel(e2, e1) < 1e-3);
    }

    #[test]
    fn lattice_tail_follows_the_far_field() {
        // beyond radius R the sum approaches (2 pi / a^2) int_R^inf rho E(rho) drho
        let (a, b, g) = (1.0, 1.0, 0.1);
        let cfg = Lattice2DPairConfig::new(a, b, [0.0, 0.0], g).unwrap();
        let (n1, n2) = (40, 80);
        let tail = pairwise_energy_lattice2d(&cfg, n2).unwrap() - pairwise_energy_lattice2d(&cfg, n1).unwrap();
        let coeff = -g * g / (64.0 * PI.powi(3));
        // square shells: integrate the far field over the annulus between the squares
        let annulus = |n: f64| {
            let l = n * a + 0.5 * a;
            let rule = crate::numerics::GaussLegendre::new(32);
            integrate_finite(
                &rule,
                |x| {
                    let inner = |y: f64| coeff / (b * b + x * x + y * y).powf(1.5);
                    integrate_finite(&rule, inner, -l, l, 1e-10)
                },
                -l,
                l,
                1e-10,
            )
        };
        let estimate = (annulus(n2 as f64) - annulus(n1 as f64)) / (a * a);
        assert!(rel(tail, estimate) < 1e-2);
    }

    #[test]
    fn pairwise_symmetry_and_period() {
        let e = |c: f64| pairwise_energy_chain(&ChainPairConfig { a: 1.0, b: 0.5, c, g: 0.1 }, 200).unwrap();
        assert!(rel(e(0.3), e(0.7)) < 1e-6);
        assert!(rel(e(0.3), e(1.3)) < 1e-6);
        let l = |c: [f64; 2]| pairwise_energy_lattice2d(&Lattice2DPairConfig { a: 1.0, b: 0.5, c, g: 0.1 }, 30).unwrap();
        assert!(rel(l([0.2, 0.1]), l([0.8, 0.9])) < 1e-4);
    }

    #[test]
    fn force_is_attractive_and_integrates_to_energy() {
        let cfg = ChainPairConfig::new(1.0, 0.5, 0.0, 0.1).unwrap();
        for &z in &[0.1, 0.5, 2.0, 10.0] {
            assert!(pairwise_force_chain(&cfg, z, 50).unwrap() < 0.0);
        }
        let single = pairwise_force_chain(&cfg, 0.7, 0).unwrap();
        assert_eq!(single, -casimir_polder_slope(0.1, 0.7).unwrap());

        let n = 20;
        let f = |t: f64| -> Result<f64> {
            // z = b + t, integrated to infinity
            pairwise_force_chain(&cfg, cfg.b + t, n)
        };
        let rule = GaussLegendre::new(32);
        let est = semiinfinite(&rule, &f, &quad().with_tol(1e-10), cfg.b, false, &[]).unwrap();
        let e = pairwise_energy_chain(&cfg, n).unwrap();
        assert!(rel(est.value, e) < 1e-8);
    }

    #[test]
    fn sphere_s_wave_closed_form() {
        let cfg = SphereConfig::new(0.3, 2.0, 1.5).unwrap();
        let xi: f64 = 0.8;
        let x = xi * cfg.radius;
        let ik = -(-2.0 * x).exp_m1() / (2.0 * x);
        let expected = -cfg.g * cfg.radius / (4.0 * PI) / (1.0 + cfg.g / (4.0 * PI * 0.09) * ik);
        assert!(rel(sphere_phi_inverse(xi, 0, &cfg).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn sphere_weak_and_high_frequency_limits() {
        let bare = |g: f64| -g * 0.3 / (4.0 * PI);
        let weak = SphereConfig::new(0.3, 2.0, 1e-8).unwrap();
        assert!(rel(sphere_phi_inverse(1.0, 2, &weak).unwrap(), bare(1e-8)) < 1e-8);
        let cfg = SphereConfig::new(0.3, 2.0, 1.5).unwrap();
        assert!(rel(sphere_phi_inverse(1e7, 1, &cfg).unwrap(), bare(1.5)) < 1e-6);
    }

    #[test]
    fn sphere_singular_denominator() {
        let cfg = SphereConfig::new(0.1, 1.0, -100.0).unwrap();
        assert!(matches!(sphere_phi_inverse(0.01, 0, &cfg), Err(Error::Singularity { .. })));
        assert!(SphereConfig::new(0.6, 1.0, 1.0).is_err());
    }

    #[test]
    fn sphere_energy_delegates() {
        let a = sphere_large_separation_energy(0.2, 1.5, &quad()).unwrap();
        let b = casimir_polder_two_point(0.2, 1.5, &quad()).unwrap();
        assert_eq!(a, b);
    }
}
