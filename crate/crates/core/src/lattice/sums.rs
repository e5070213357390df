//! Lattice sums on the imaginary frequency axis.
//!
//! `J1(xi, k) = sum'_n exp(-xi |a_n|) cos(k . a_n) / |a_n|` over the in-plane
//! lattice (or the chain), and the screened inter-lattice sums
//! `S(xi, q) = sum_n G(rho_n) exp(-i q . (a_n + c))`, `rho_n = |(a_n + c, b)|`.
//!
//! The Poisson-resummed forms are
//! `S_2d = a^-2 sum_G exp(-gamma b + i G.c) / (2 gamma)` and
//! `S_1d = (2 pi a)^-1 sum_N K0(b gamma) exp(i G c)`, `gamma = |(xi, q + G)|`.
//!
//! The Gaussian split uses, for `f(rho) = exp(-xi rho)/rho`,
//! `SR(rho) = [exp(-xi rho) erfc(eta rho - xi/2eta) + exp(xi rho) erfc(eta rho + xi/2eta)] / (2 rho)`
//! with the in-plane Fourier transform of the remainder at height `b`
//! `(pi/gamma) X`, `X = exp(gamma b) erfc(u+v) + exp(-gamma b) erfc(u-v)`,
//! `u = gamma/(2 eta)`, `v = b eta`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ChainPairConfig, Lattice2DPairConfig, MomentumDecomposition, SumMethod, TruncationSpec};
use crate::error::{domain, Error, Result};
use crate::numerics::bessel::k0_unchecked;
use crate::numerics::erf::{erf, erfc, erfcx};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// A lattice sum with its `G = 0` reciprocal term held apart. The zero mode is
/// singular as `gamma -> 0`; keeping it separate lets callers cancel it
/// analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Split<T> {
    pub zero: f64,
    pub rest: T,
}

impl Split<f64> {
    pub fn total(&self) -> f64 {
        self.zero + self.rest
    }
}

impl Split<Complex64> {
    pub fn total(&self) -> Complex64 {
        self.rest + self.zero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Path {
    Direct,
    Ewald,
    Reciprocal,
}

/// Short-range part of `exp(-xi rho)/rho` for the Gaussian split `eta`.
fn short_range(rho: f64, xi: f64, eta: f64) -> f64 {
    let s = xi / (2.0 * eta);
    let zm = eta * rho - s;
    let zp = eta * rho + s;
    let gauss = (-(eta * rho).powi(2) - s * s).exp();
    let plus = erfcx(zp) * gauss;
    let minus = if zm > 0.0 {
        erfcx(zm) * gauss
    } else {
        (-xi * rho).exp() * erfc(zm)
    };
    0.5 * (minus + plus) / rho
}

/// `X(gamma, b)` of the long-range transform, overflow free.
fn long_range_x(gamma: f64, b: f64, eta: f64) -> f64 {
    let u = gamma / (2.0 * eta);
    let v = b * eta;
    let gauss = (-u * u - v * v).exp();
    let first = erfcx(u + v) * gauss;
    let second = if u > v {
        erfcx(u - v) * gauss
    } else {
        (-gamma * b).exp() * erfc(u - v)
    };
    first + second
}

/// `2 erf(u) - erf(v + u) + erf(v - u)`, accurate for small `u`.
fn erf_gap(u: f64, v: f64) -> f64 {
    if u > 0.01 {
        return 2.0 * erf(u) - erf(v + u) + erf(v - u);
    }
    // odd Taylor terms in u with Hermite polynomials H_0, H_2, H_4, H_6
    let w = (-v * v).exp();
    let v2 = v * v;
    let h = [
        (1.0, 1.0),
        (-2.0, 4.0 * v2 - 2.0),
        (12.0, (16.0 * v2 - 48.0) * v2 + 12.0),
        (-120.0, ((64.0 * v2 - 480.0) * v2 + 720.0) * v2 - 120.0),
    ];
    let mut term = u;
    let mut acc = 0.0;
    for (m, (h0, hv)) in h.iter().enumerate() {
        acc += term * (h0 - hv * w);
        let k = (2 * m + 2) as f64;
        term *= u * u / (k * (k + 1.0));
    }
    2.0 / SQRT_PI * 2.0 * acc
}

/// `X - 2 erfc(u)` without cancellation for small `gamma`.
fn long_range_gap(gamma: f64, b: f64, eta: f64) -> f64 {
    let u = gamma / (2.0 * eta);
    let v = b * eta;
    let gb = gamma * b;
    if gb > 1.0 || u > 1.0 {
        return long_range_x(gamma, b, eta) - 2.0 * erfc(u);
    }
    gb.exp_m1() * erfc(u + v) + (-gb).exp_m1() * erfc(u - v) + erf_gap(u, v)
}

/// Real-space self term removed from the long-range lattice sum.
fn long_range_origin(xi: f64, eta: f64) -> f64 {
    let s = xi / (2.0 * eta);
    2.0 * eta / SQRT_PI * (-s * s).exp() - xi * erfc(s)
}

fn phases(k: f64, a: f64, offset: f64, lo: i64, hi: i64) -> Vec<Complex64> {
    (lo..=hi)
        .map(|n| Complex64::from_polar(1.0, -k * (n as f64 * a + offset)))
        .collect()
}

fn recip_phases(c: f64, a: f64, nmax: i64) -> Vec<Complex64> {
    (-nmax..=nmax)
        .map(|n| Complex64::from_polar(1.0, 2.0 * PI * n as f64 * c / a))
        .collect()
}

/// Half-width of the index range `|n a + c| <= x`.
fn index_range(x: f64, c: f64, a: f64) -> (i64, i64) {
    (((-x - c) / a).ceil() as i64, ((x - c) / a).floor() as i64)
}

fn recip_cutoff(gamma_max: f64, xi: f64, a: f64, min: usize) -> i64 {
    let kmax = (gamma_max * gamma_max - xi * xi).max(0.0).sqrt();
    ((kmax * a / (2.0 * PI)).ceil() as i64 + 1).max(min as i64)
}

/// Shell `m` of the direct sum whose tail `2 pi exp(-xi a m) / (xi a)` meets the budget.
fn direct_shell(xi: f64, a: f64, budget: f64) -> usize {
    let xa = xi * a;
    let m = (budget + (2.0 * PI / xa).ln().max(0.0)) / xa;
    m.ceil().max(1.0) as usize
}

fn direct_j1_2d(xi: f64, k: [f64; 2], a: f64, m: usize) -> f64 {
    let m = m as i64;
    let c1: Vec<f64> = (0..=m).map(|n| (k[0] * a * n as f64).cos()).collect();
    let c2: Vec<f64> = (0..=m).map(|n| (k[1] * a * n as f64).cos()).collect();
    let mut acc = 0.0;
    for n1 in 0..=m {
        let w1 = if n1 > 0 { 2.0 } else { 1.0 };
        let mut row = 0.0;
        for n2 in 0..=m {
            if n1 == 0 && n2 == 0 {
                continue;
            }
            let w2 = if n2 > 0 { 2.0 } else { 1.0 };
            let r = a * (n1 as f64).hypot(n2 as f64);
            row += w2 * (-xi * r).exp() / r * c2[n2 as usize];
        }
        acc += w1 * c1[n1 as usize] * row;
    }
    acc
}

fn ewald_j1_2d(xi: f64, q: [f64; 2], a: f64, eta: f64, budget: f64) -> Result<Split<f64>> {
    let s = xi / (2.0 * eta);
    let r_cut = (budget.sqrt() + s) / eta;
    let m = (r_cut / a).ceil() as i64;
    let c1: Vec<f64> = (0..=m).map(|n| (q[0] * a * n as f64).cos()).collect();
    let c2: Vec<f64> = (0..=m).map(|n| (q[1] * a * n as f64).cos()).collect();
    let mut real = 0.0;
    for n1 in 0..=m {
        let w1 = if n1 > 0 { 2.0 } else { 1.0 };
        let mut row = 0.0;
        for n2 in 0..=m {
            if n1 == 0 && n2 == 0 {
                continue;
            }
            let r = a * (n1 as f64).hypot(n2 as f64);
            if r > r_cut {
                break;
            }
            let w2 = if n2 > 0 { 2.0 } else { 1.0 };
            row += w2 * short_range(r, xi, eta) * c2[n2 as usize];
        }
        real += w1 * c1[n1 as usize] * row;
    }

    let gamma_max = 2.0 * eta * budget.sqrt();
    let nmax = recip_cutoff(gamma_max, xi, a, 1);
    let period = 2.0 * PI / a;
    let norm = 2.0 * PI / (a * a);
    let gamma0 = xi.hypot(q[0].hypot(q[1]));
    if gamma0 == 0.0 {
        return Err(Error::Singularity {
            xi,
            q: q.to_vec(),
            value: f64::INFINITY,
        });
    }
    let zero = norm * erfc(gamma0 / (2.0 * eta)) / gamma0;
    let mut recip = 0.0;
    for n1 in -nmax..=nmax {
        let k1 = q[0] + period * n1 as f64;
        for n2 in -nmax..=nmax {
            if n1 == 0 && n2 == 0 {
                continue;
            }
            let k2 = q[1] + period * n2 as f64;
            let gamma = (xi * xi + k1 * k1 + k2 * k2).sqrt();
            if gamma > gamma_max {
                continue;
            }
            recip += erfc(gamma / (2.0 * eta)) / gamma;
        }
    }
    Ok(Split {
        zero,
        rest: real + norm * recip - long_range_origin(xi, eta),
    })
}

fn j1_path(xi: f64, a: f64, trunc: &TruncationSpec) -> Result<(Path, usize)> {
    match trunc.method {
        SumMethod::Ewald => Ok((Path::Ewald, 0)),
        SumMethod::Direct => {
            if xi <= 0.0 {
                return Err(domain(
                    "j1_lattice_sum",
                    "direct summation diverges conditionally at xi = 0; use the Ewald path",
                ));
            }
            Ok((Path::Direct, direct_shell(xi, a, trunc.log_budget()).min(trunc.n_direct)))
        }
        SumMethod::Auto => {
            if xi > 0.0 {
                let m = direct_shell(xi, a, trunc.log_budget());
                if m <= trunc.n_direct {
                    return Ok((Path::Direct, m));
                }
            }
            Ok((Path::Ewald, 0))
        }
    }
}

pub(crate) fn j1_split(xi: f64, k: [f64; 2], a: f64, trunc: &TruncationSpec) -> Result<(Split<f64>, Path)> {
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(domain("j1_lattice_sum", format!("xi must be >= 0, got {xi}")));
    }
    let (path, m) = j1_path(xi, a, trunc)?;
    match path {
        Path::Direct => Ok((
            Split {
                zero: 0.0,
                rest: direct_j1_2d(xi, k, a, m),
            },
            path,
        )),
        _ => {
            let q = MomentumDecomposition::new(xi, k, a).q;
            Ok((ewald_j1_2d(xi, q, a, trunc.eta(a), trunc.log_budget())?, Path::Ewald))
        }
    }
}

/// `J1(xi, k)` for the square lattice of spacing `a`.
pub fn j1_lattice_sum(xi: f64, k: [f64; 2], a: f64, trunc: &TruncationSpec) -> Result<f64> {
    trunc.validate()?;
    Ok(j1_split(xi, k, a, trunc)?.0.total())
}

/// `J1(xi, k)` for the chain of spacing `a`, in closed form:
/// `-(1/a) ln(1 - 2 exp(-xi a) cos(k a) + exp(-2 xi a))`.
pub fn j1_lattice_sum_1d(xi: f64, k: f64, a: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(domain("j1_lattice_sum_1d", format!("xi must be >= 0, got {xi}")));
    }
    let e = (-xi * a).exp();
    let s = (0.5 * k * a).sin();
    let arg = (-xi * a).exp_m1().powi(2) + 4.0 * e * s * s;
    if !(arg > 0.0) {
        return Err(Error::Singularity {
            xi,
            q: vec![k],
            value: f64::INFINITY,
        });
    }
    Ok(-arg.ln() / a)
}

fn real_space_2d(q: [f64; 2], cfg: &Lattice2DPairConfig, rmax: f64, f: impl Fn(f64) -> f64) -> Complex64 {
    let a = cfg.a;
    let (lo1, hi1) = index_range(rmax, cfg.c[0], a);
    let (lo2, hi2) = index_range(rmax, cfg.c[1], a);
    let p1 = phases(q[0], a, cfg.c[0], lo1, hi1);
    let p2 = phases(q[1], a, cfg.c[1], lo2, hi2);
    let b2 = cfg.b * cfg.b;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, n1) in (lo1..=hi1).enumerate() {
        let x = n1 as f64 * a + cfg.c[0];
        let half = (rmax * rmax - x * x).max(0.0).sqrt();
        let (lo, hi) = index_range(half, cfg.c[1], a);
        let mut row = Complex64::new(0.0, 0.0);
        for n2 in lo.max(lo2)..=hi.min(hi2) {
            let y = n2 as f64 * a + cfg.c[1];
            row += p2[(n2 - lo2) as usize] * f((b2 + x * x + y * y).sqrt());
        }
        acc += p1[i] * row;
    }
    acc / (4.0 * PI)
}

/// Reciprocal sum `a^-2 sum_G t(gamma_G) exp(i G.c)` with the `G = 0` term split off.
///
/// Every term with `|N_i| <= nmin` is kept; beyond that only terms with
/// `gamma <= gamma_max`.
fn reciprocal_2d(
    xi: f64,
    q: [f64; 2],
    cfg: &Lattice2DPairConfig,
    nmin: i64,
    gamma_max: f64,
    t: impl Fn(f64) -> f64,
) -> Split<Complex64> {
    let a = cfg.a;
    let period = 2.0 * PI / a;
    let nmax = recip_cutoff(gamma_max, xi, a, nmin as usize);
    let e1 = recip_phases(cfg.c[0], a, nmax);
    let e2 = recip_phases(cfg.c[1], a, nmax);
    let mut rest = Complex64::new(0.0, 0.0);
    let mut zero = 0.0;
    for n1 in -nmax..=nmax {
        let k1 = q[0] + period * n1 as f64;
        let kk = (gamma_max * gamma_max - xi * xi - k1 * k1).max(-1.0);
        let (mut lo, mut hi) = if kk >= 0.0 {
            let k = kk.sqrt();
            (((-k - q[1]) / period).ceil() as i64, ((k - q[1]) / period).floor() as i64)
        } else {
            (1, 0)
        };
        if n1.abs() <= nmin {
            lo = lo.min(-nmin);
            hi = hi.max(nmin);
        }
        let mut row = Complex64::new(0.0, 0.0);
        for n2 in lo.max(-nmax)..=hi.min(nmax) {
            let k2 = q[1] + period * n2 as f64;
            let gamma = (xi * xi + k1 * k1 + k2 * k2).sqrt();
            if n1 == 0 && n2 == 0 {
                zero = t(gamma);
                continue;
            }
            row += e2[(n2 + nmax) as usize] * t(gamma);
        }
        rest += e1[(n1 + nmax) as usize] * row;
    }
    let norm = 1.0 / (a * a);
    Split {
        zero: zero * norm,
        rest: rest * norm,
    }
}

/// Everything the 2D kernel needs at one `(xi, q)`: `phi~` and `S` with their
/// zero modes split off, and `phi~_0 - S_0` computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair2d {
    pub phi: Split<f64>,
    pub s: Split<Complex64>,
    pub zero_gap: f64,
}

/// Rough relative costs of the real-space, reciprocal and Ewald paths.
fn screened_cost_2d(xi: f64, gamma0: f64, cfg: &Lattice2DPairConfig, trunc: &TruncationSpec) -> (f64, f64, f64) {
    let a = cfg.a;
    let b = cfg.b;
    let budget = trunc.log_budget();
    let disc = |r: f64| PI * (r / a).powi(2) + 1.0;
    let kdisc = |g: f64| PI * ((g * g - xi * xi).max(0.0) * (a / (2.0 * PI)).powi(2)) + 1.0;
    let real = if xi > 0.0 {
        disc(((b + budget / xi).powi(2) - b * b).sqrt())
    } else {
        f64::INFINITY
    };
    let square = (2.0 * trunc.n_recip as f64 + 1.0).powi(2);
    let recip = kdisc(gamma0 + budget / b).max(square);
    let eta = trunc.eta(a);
    let rs = (budget.sqrt() + xi / (2.0 * eta)) / eta;
    let gmax = (gamma0 + budget / b).min(2.0 * eta * (budget + gamma0 * b).sqrt());
    // erfc-based terms cost about twice an exponential
    let ewald = 2.0 * (disc((rs * rs - b * b).max(0.0).sqrt()) + kdisc(gmax));
    (real, recip, ewald)
}

pub(crate) fn screened_split_2d(
    xi: f64,
    q: [f64; 2],
    cfg: &Lattice2DPairConfig,
    trunc: &TruncationSpec,
    allow_real: bool,
) -> Result<(Split<Complex64>, Path)> {
    let a = cfg.a;
    let b = cfg.b;
    let budget = trunc.log_budget();
    let gamma0 = xi.hypot(q[0].hypot(q[1]));
    if gamma0 == 0.0 {
        return Err(Error::Singularity {
            xi,
            q: q.to_vec(),
            value: f64::INFINITY,
        });
    }
    let (real, recip, ewald) = screened_cost_2d(xi, gamma0, cfg, trunc);
    let path = match trunc.method {
        SumMethod::Direct => {
            if xi <= 0.0 {
                return Err(domain("screened_sum_2d", "direct summation needs xi > 0"));
            }
            Path::Direct
        }
        SumMethod::Ewald => Path::Ewald,
        SumMethod::Auto => {
            if allow_real && real < recip.min(ewald) {
                Path::Direct
            } else if recip <= ewald {
                Path::Reciprocal
            } else {
                Path::Ewald
            }
        }
    };
    let split = match path {
        Path::Direct => {
            let rmax = ((b + budget / xi).powi(2) - b * b).sqrt();
            let f = |rho: f64| (-xi * rho).exp() / rho;
            Split {
                zero: 0.0,
                rest: real_space_2d(q, cfg, rmax, f),
            }
        }
        Path::Reciprocal => {
            let gmax = gamma0 + budget / b;
            reciprocal_2d(xi, q, cfg, trunc.n_recip as i64, gmax, |g| (-g * b).exp() / (2.0 * g))
        }
        Path::Ewald => {
            let eta = trunc.eta(a);
            let s = xi / (2.0 * eta);
            let rs = (budget.sqrt() + s) / eta;
            let short = if rs > b {
                let rmax = (rs * rs - b * b).sqrt();
                real_space_2d(q, cfg, rmax, |rho| short_range(rho, xi, eta))
            } else {
                Complex64::new(0.0, 0.0)
            };
            let gmax = (gamma0 + budget / b).min(2.0 * eta * (budget + gamma0 * b).sqrt());
            let mut long = reciprocal_2d(xi, q, cfg, 0, gmax, |g| long_range_x(g, b, eta) / (4.0 * g));
            long.rest += short;
            long
        }
    };
    Ok((split, path))
}

pub(crate) fn pair_2d(xi: f64, q: [f64; 2], cfg: &Lattice2DPairConfig, trunc: &TruncationSpec) -> Result<Pair2d> {
    let (j1, jpath) = j1_split(xi, q, cfg.a, trunc)?;
    let phi = Split {
        zero: j1.zero / (4.0 * PI),
        rest: 1.0 / cfg.g + j1.rest / (4.0 * PI),
    };
    super::phi::guard(phi.total(), xi, &q, cfg.g)?;
    let (s, spath) = screened_split_2d(xi, q, cfg, trunc, jpath == Path::Direct)?;
    let gamma0 = xi.hypot(q[0].hypot(q[1]));
    let a2 = cfg.a * cfg.a;
    let zero_gap = match (jpath, spath) {
        (Path::Ewald, Path::Ewald) => -long_range_gap(gamma0, cfg.b, trunc.eta(cfg.a)) / (4.0 * a2 * gamma0),
        (Path::Ewald, Path::Reciprocal) => {
            let u = gamma0 / (2.0 * trunc.eta(cfg.a));
            (-(-gamma0 * cfg.b).exp_m1() - erf(u)) / (2.0 * a2 * gamma0)
        }
        _ => phi.zero - s.zero,
    };
    Ok(Pair2d { phi, s, zero_gap })
}

/// `S(xi, q) = sum_n exp(-xi rho_n) / (4 pi rho_n) exp(-i q.(a_n + c))` between two
/// square lattices.
pub fn screened_sum_2d(xi: f64, q: [f64; 2], cfg: &Lattice2DPairConfig, trunc: &TruncationSpec) -> Result<Complex64> {
    trunc.validate()?;
    if !(xi >= 0.0) {
        return Err(domain("screened_sum_2d", format!("xi must be >= 0, got {xi}")));
    }
    Ok(screened_split_2d(xi, q, cfg, trunc, true)?.0.total())
}

pub(crate) fn screened_split_1d(xi: f64, q: f64, cfg: &ChainPairConfig, trunc: &TruncationSpec) -> Result<Complex64> {
    let a = cfg.a;
    let b = cfg.b;
    let c = cfg.c;
    let budget = trunc.log_budget();
    let gamma0 = xi.hypot(q);
    if gamma0 == 0.0 {
        return Err(Error::Singularity {
            xi,
            q: vec![q],
            value: f64::INFINITY,
        });
    }
    let gmax = gamma0 + budget / b;
    let nmax = recip_cutoff(gmax, xi, a, trunc.n_recip);
    let xmax = if xi > 0.0 {
        ((b + budget / xi).powi(2) - b * b).sqrt()
    } else {
        f64::INFINITY
    };
    let real_count = 2.0 * xmax / a + 1.0;
    // a K0 evaluation costs a few exponentials
    let recip_count = 3.0 * (2.0 * nmax as f64 + 1.0);
    let nmin = trunc.n_recip as i64;
    let use_real = match trunc.method {
        SumMethod::Direct => {
            if xi <= 0.0 {
                return Err(domain("screened_sum_1d", "direct summation needs xi > 0"));
            }
            true
        }
        SumMethod::Ewald => false,
        SumMethod::Auto => real_count < recip_count,
    };
    if use_real {
        let (lo, hi) = index_range(xmax, c, a);
        let mut acc = Complex64::new(0.0, 0.0);
        for n in lo..=hi {
            let x = n as f64 * a + c;
            let rho = b.hypot(x);
            acc += Complex64::from_polar((-xi * rho).exp() / rho, -q * x);
        }
        Ok(acc / (4.0 * PI))
    } else {
        let period = 2.0 * PI / a;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in -nmax..=nmax {
            let k = q + period * n as f64;
            let gamma = xi.hypot(k);
            if n.abs() > nmin && gamma > gmax {
                continue;
            }
            acc += Complex64::from_polar(k0_unchecked(b * gamma), period * n as f64 * c);
        }
        Ok(acc / (2.0 * PI * a))
    }
}

/// `S(xi, q) = sum_n exp(-xi rho_n) / (4 pi rho_n) exp(-i q (n a + c))` between two chains.
pub fn screened_sum_1d(xi: f64, q: f64, cfg: &ChainPairConfig, trunc: &TruncationSpec) -> Result<Complex64> {
    trunc.validate()?;
    if !(xi >= 0.0) {
        return Err(domain("screened_sum_1d", format!("xi must be >= 0, got {xi}")));
    }
    screened_split_1d(xi, q, cfg, trunc)
}
