//! Special functions, quadrature and summation helpers.

pub mod bessel;
pub mod dilog;
pub mod erf;
pub mod quadrature;
pub mod sum;

pub use bessel::{
    bessel_i, bessel_i_half, bessel_i_half_scaled, bessel_i_scaled, bessel_k, bessel_k_half,
    bessel_k_half_scaled, bessel_k_scaled, ln_bessel_i, ln_bessel_k,
};
pub use dilog::dilog;
pub use erf::{erf, erfc, erfcx};
pub use quadrature::{integrate_semiinfinite, Adaptive, Estimate, GaussLegendre, QuadratureSpec, XiTransform};
pub use sum::{compensated_sum, Neumaier};
