//! Momentum-space TGTG kernels, energies per cell and the position-space oracle.

mod energy;
mod finite;
mod kernel;

pub use energy::{energy_1d, energy_2d};
pub(crate) use finite::log_det_one_minus;
pub use finite::{chain_segments, finite_lattice_energy, richardson_in_inverse_n, FiniteLatticeSpec};
pub use kernel::{kernel_h_1d, kernel_h_2d};

/// Quantities gathered while integrating, for judging a result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Largest `|h|^2` met on the quadrature grid.
    pub max_h2: f64,
    /// Relative tail bound each lattice sum was truncated to.
    pub tail_bound: f64,
    /// Kernel evaluations.
    pub evaluations: usize,
    /// Frequency panels after refinement.
    pub xi_panels: usize,
}

/// An energy per cell with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub value: f64,
    pub error_estimate: f64,
    pub diagnostics: Diagnostics,
}
