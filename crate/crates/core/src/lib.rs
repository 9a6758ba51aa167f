//! Quadrature-based hyperinterpolation spectral solver for the Allen-Cahn
//! equation `u_t = ν²Δu - (u³ - u)` on the unit sphere.
//!
//! The crate is organized bottom-up:
//!
//! - [`harmonics`]: real orthonormal spherical harmonics, their surface
//!   gradients, Laplace-Beltrami eigenvalues and the reproducing kernel.
//! - [`quadrature`]: point sets with positive weights, exactness and
//!   Marcinkiewicz-Zygmund diagnostics, mesh norm, point-file I/O.
//! - [`hyperinterp`]: the discrete inner product and the hyperinterpolation
//!   operator `L_N`.
//! - [`solver`]: the IMEX scheme, its mixed-quadrature variant, energies,
//!   uniform-norm estimates and stability constants.

pub mod error;
pub mod harmonics;
pub mod hyperinterp;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
pub use harmonics::{
    dim_pn, eval_basis, eval_expansion, eval_surface_gradient, kernel_value, laplace_eigenvalue,
    z_dim, BasisIndex, BasisMatrix, SphericalPoint,
};
pub use hyperinterp::{
    discrete_inner, hyperinterpolate, uniform_norm_bound, HarmonicCoefficients, Hyperinterpolator,
};
pub use quadrature::{
    equal_area_rule, exactness_error, exactness_profile, gauss_product_rule, load_rule, mesh_norm,
    mz_constant, random_rule, write_rule, MzReport, QuadratureRule,
};
pub use solver::{
    continuous_energy, discrete_energy, effective_envelope, run, stability_constants,
    uniform_norm_estimate, ProbeGrid, RunOutput, Solver, SolverConfig, SolverState,
    StabilityConstants, StepDiagnostics,
};

/// The initial condition `u₀(x, y, z) = cos(cosh(5xz) - 10y)` used in the
/// reference experiments.
pub fn reference_initial_condition(p: &SphericalPoint) -> f64 {
    ((5.0 * p.x * p.z).cosh() - 10.0 * p.y).cos()
}
