//! Closed-form and reduced-dimension limits of the lattice energies, pairwise
//! summation, and the sphere and cylinder oracles.
//!
//! The plane reflection coefficient is `r = 1 / (1 + 2 gamma a^2 / g)`, the
//! value the lattice kernel approaches for `a -> 0` with the sign convention of
//! [`crate::lattice`]. It stays below one, so the plane limit needs no guard.

mod cylinder;
mod planes;
mod points;

pub use cylinder::{cylinder_energy_fixed_lmax, cylinder_energy_per_length, CylinderEnergy, CylinderPairConfig};
pub use planes::{delta_plane_reflection, dirichlet_planes_energy, lifshitz_delta_planes, wire_limit_energy, WireLimit};
pub use points::{
    casimir_polder_closed, casimir_polder_slope, casimir_polder_two_point, pairwise_energy_chain,
    pairwise_energy_lattice2d, pairwise_force_chain, sphere_large_separation_energy, sphere_phi_inverse,
    SphereConfig,
};
