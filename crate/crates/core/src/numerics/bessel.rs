//! Modified Bessel functions `I` and `K` of integer and half-integer order.
//!
//! Integer orders use the ascending series for `x <= 2` (K) and a Steed
//! continued fraction above it; `I` ratios come from backward recurrence, which
//! is stable in the direction where `I_n` decreases. Logarithmic variants never
//! form the (possibly overflowing) values themselves, so multipole matrices can
//! be assembled for tiny arguments and large orders.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 500;

fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("argument must be positive and finite, got {x}")))
    }
}

/// `(K_0(x) e^x, K_1(x) e^x)` for `x > 0`.
fn k01_scaled(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k01_steed_scaled(x)
    }
}

/// Ascending series for `K_0` and `K_1`, accurate for small arguments.
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();

    // K_0 = -(ln(x/2) + gamma) I_0 + sum_k y^k/(k!)^2 H_k
    let mut t = 1.0;
    let mut i0 = 1.0;
    let mut harmonic_part = 0.0;
    let mut h = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        t *= y / (kf * kf);
        h += 1.0 / kf;
        i0 += t;
        harmonic_part += t * h;
        if t < EPS * i0 {
            break;
        }
    }
    let k0 = -(ln_half + EULER_GAMMA) * i0 + harmonic_part;

    // K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_k (psi(k+1) + psi(k+2)) y^k / (k!(k+1)!)
    let mut t = 1.0;
    let mut i1_sum = 1.0;
    let mut psi_sum = -2.0 * EULER_GAMMA + 1.0;
    let mut hk = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        t *= y / (kf * (kf + 1.0));
        hk += 1.0 / kf;
        let psi = -2.0 * EULER_GAMMA + 2.0 * hk + 1.0 / (kf + 1.0);
        i1_sum += t;
        psi_sum += t * psi;
        if t < EPS * i1_sum {
            break;
        }
    }
    let i1 = 0.5 * x * i1_sum;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * psi_sum;
    (k0, k1)
}

/// Steed's continued fraction (CF2) for `K_0 e^x`, `K_1 e^x`, valid for `x >= 2`.
fn k01_steed_scaled(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `I_0(x) e^{-x}` for `x >= 0`.
fn i0_scaled(x: f64) -> f64 {
    if x <= 30.0 {
        let y = 0.25 * x * x;
        let mut t = 1.0;
        let mut acc = 1.0;
        for k in 1..SERIES_MAX_TERMS {
            let kf = k as f64;
            t *= y / (kf * kf);
            acc += t;
            if t < EPS * acc {
                break;
            }
        }
        acc * (-x).exp()
    } else {
        // Hankel expansion; all terms positive for order zero
        let mut t = 1.0;
        let mut acc = 1.0;
        for k in 1..60 {
            let odd = (2 * k - 1) as f64;
            t *= odd * odd / (k as f64 * 8.0 * x);
            acc += t;
            if t < EPS * acc {
                break;
            }
        }
        acc / (2.0 * PI * x).sqrt()
    }
}

/// `ln prod_{k=0}^{n-1} I_{nu+k+1}(x) / I_{nu+k}(x)` by backward ratio recurrence.
fn ln_i_ratio_product(nu: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let start = n + 40 + (2.0 * x).ceil() as usize;
    // r_k = I_{nu+k+1}/I_{nu+k} = x / (2(nu+k+1) + x r_{k+1})
    let mut r = 0.0;
    let mut ratios = vec![0.0; n];
    for k in (0..start).rev() {
        r = x / (2.0 * (nu + k as f64 + 1.0) + x * r);
        if k < n {
            ratios[k] = r;
        }
    }
    ratios.iter().map(|r| r.ln()).sum()
}

/// Modified Bessel function of the second kind `K_n(x)` for integer `n >= 0`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    check_positive("bessel_k", x)?;
    Ok(bessel_k_scaled_unchecked(order, x) * (-x).exp())
}

/// Exponentially scaled `K_n(x) e^x`, finite for arbitrarily large `x`.
pub fn bessel_k_scaled(order: u32, x: f64) -> Result<f64> {
    check_positive("bessel_k_scaled", x)?;
    Ok(bessel_k_scaled_unchecked(order, x))
}

pub(crate) fn bessel_k_scaled_unchecked(order: u32, x: f64) -> f64 {
    let (k0, k1) = k01_scaled(x);
    match order {
        0 => k0,
        1 => k1,
        _ => {
            let (mut km, mut k) = (k0, k1);
            for n in 1..order {
                let kp = km + 2.0 * n as f64 / x * k;
                km = k;
                k = kp;
            }
            k
        }
    }
}

/// `K_0(x)` without the domain check, for hot loops that guarantee `x > 0`.
#[inline]
pub(crate) fn k0_unchecked(x: f64) -> f64 {
    if x > 745.0 {
        return 0.0;
    }
    if x <= 2.0 {
        k01_series(x).0
    } else {
        k01_steed_scaled(x).0 * (-x).exp()
    }
}

/// `ln K_n(x)`, free of overflow for small `x` and large `n`.
pub fn ln_bessel_k(order: u32, x: f64) -> Result<f64> {
    check_positive("ln_bessel_k", x)?;
    let (k0, k1) = k01_scaled(x);
    let mut ln = k0.ln() - x;
    if order == 0 {
        return Ok(ln);
    }
    // rho_n = K_{n+1}/K_n = 1/rho_{n-1} + 2n/x
    let mut rho = k1 / k0;
    ln += rho.ln();
    for n in 1..order {
        rho = 1.0 / rho + 2.0 * n as f64 / x;
        ln += rho.ln();
    }
    Ok(ln)
}

/// `ln K_n(x)` for `n = 0..=nmax`, by forward ratio recurrence.
pub(crate) fn ln_bessel_k_seq(nmax: usize, x: f64) -> Vec<f64> {
    let (k0, k1) = k01_scaled(x);
    let mut out = Vec::with_capacity(nmax + 1);
    let mut ln = k0.ln() - x;
    out.push(ln);
    let mut rho = k1 / k0;
    for n in 0..nmax {
        if n > 0 {
            rho = 1.0 / rho + 2.0 * n as f64 / x;
        }
        ln += rho.ln();
        out.push(ln);
    }
    out
}

/// `ln I_n(x)` for `n = 0..=nmax`, from one backward ratio recurrence.
pub(crate) fn ln_bessel_i_seq(nmax: usize, x: f64) -> Vec<f64> {
    let mut ratios = vec![0.0; nmax];
    let start = nmax + 40 + (2.0 * x).ceil() as usize;
    let mut r = 0.0;
    for k in (0..start).rev() {
        r = x / (2.0 * (k as f64 + 1.0) + x * r);
        if k < nmax {
            ratios[k] = r;
        }
    }
    let mut ln = i0_scaled(x).ln() + x;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(ln);
    for r in ratios {
        ln += r.ln();
        out.push(ln);
    }
    out
}

/// Modified Bessel function of the first kind `I_n(x)` for integer `n >= 0`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_positive("bessel_i", x)?;
    Ok((ln_i_scaled(order as usize, x) + x).exp())
}

/// Exponentially scaled `I_n(x) e^{-x}`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check_positive("bessel_i_scaled", x)?;
    Ok(ln_i_scaled(order as usize, x).exp())
}

/// `ln I_n(x)`.
pub fn ln_bessel_i(order: u32, x: f64) -> Result<f64> {
    check_positive("ln_bessel_i", x)?;
    Ok(ln_i_scaled(order as usize, x) + x)
}

fn ln_i_scaled(n: usize, x: f64) -> f64 {
    i0_scaled(x).ln() + ln_i_ratio_product(0.0, n, x)
}

/// `I_{l+1/2}(x) e^{-x}`, anchored on `I_{1/2}(x) = sqrt(2/(pi x)) sinh x`.
pub fn bessel_i_half_scaled(l: u32, x: f64) -> Result<f64> {
    check_positive("bessel_i_half_scaled", x)?;
    let base = (2.0 / (PI * x)).sqrt() * 0.5 * (-(-2.0 * x).exp_m1());
    Ok((base.ln() + ln_i_ratio_product(0.5, l as usize, x)).exp())
}

/// `I_{l+1/2}(x)`.
pub fn bessel_i_half(l: u32, x: f64) -> Result<f64> {
    Ok(bessel_i_half_scaled(l, x)? * x.exp())
}

/// `K_{l+1/2}(x) e^x` from the terminating closed form.
pub fn bessel_k_half_scaled(l: u32, x: f64) -> Result<f64> {
    check_positive("bessel_k_half_scaled", x)?;
    // sum_{k=0}^{l} (l+k)! / (k! (l-k)!) (2x)^{-k}
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..=l {
        let kf = k as f64;
        let lf = l as f64;
        term *= (lf + kf) * (lf - kf + 1.0) / (kf * 2.0 * x);
        acc += term;
    }
    Ok((PI / (2.0 * x)).sqrt() * acc)
}

/// `K_{l+1/2}(x)`.
pub fn bessel_k_half(l: u32, x: f64) -> Result<f64> {
    Ok(bessel_k_half_scaled(l, x)? * (-x).exp())
}
