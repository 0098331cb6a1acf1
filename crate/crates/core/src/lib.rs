//! Phase-space and Bohmian machinery for the quantum singular oscillator.
//!
//! The singular (isotonic) oscillator is the harmonic oscillator with an added
//! inverse-square barrier `(4α² − 1)/(8x²)`. Everything here is written in the
//! dimensionless variables `x`, `k` and `τ = 2ωt`, with the half-line `x > 0`
//! as configuration space.
//!
//! Module map:
//!
//! * [`specfun`]: Laguerre polynomials, half-integer modified Bessel functions,
//!   complex error function, Gauss hypergeometric series and the Gauss–Legendre
//!   machinery used for the finite Fourier integrals.
//! * [`pure_state`]: the quasi-gaussian wave packet, its Wigner function and the
//!   classical orbits it tracks.
//! * [`bohmian`]: quantum phase, velocity field, analytic trajectories, quantum
//!   potential and force.
//! * [`thermal`]: stationary and thermal Wigner functions, partition function
//!   and purity.
//! * [`flow`]: Wigner currents, the non-Liouvillian quantifier, stagnation
//!   points and the loop-flux integral.
//! * [`field`]: phase-space grids and sampled fields with CSV/JSON output.

// `!(x > 0.0)` is used on purpose throughout so that NaN inputs are rejected
// by the same branch as out-of-range ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants are kept at the precision they were computed to
#![allow(clippy::excessive_precision)]

pub mod bohmian;
pub mod error;
pub mod field;
pub mod flow;
pub mod pure_state;
pub mod specfun;
pub mod thermal;

pub use error::{Error, Result};
pub use specfun::HalfIntOrder;

/// Operations reachable from the command-line front-end.
///
/// The CLI keeps a command → operation table and its tests check that every
/// entry listed here is covered by at least one command.
pub const OPERATIONS: &[&str] = &[
    "specfun::assoc_laguerre",
    "specfun::bessel_i",
    "specfun::bessel_i_ratio_recurrence",
    "specfun::erf_complex",
    "specfun::hyp2f1",
    "specfun::finite_fourier_quad",
    "pure_state::uv_envelope",
    "pure_state::wavepacket_density",
    "pure_state::wigner_pure",
    "pure_state::classical_orbit",
    "pure_state::gamma_from_energy",
    "bohmian::quantum_phase",
    "bohmian::velocity_field",
    "bohmian::bohm_trajectory",
    "bohmian::classical_matching_x0",
    "bohmian::quantum_potential",
    "bohmian::quantum_force",
    "bohmian::special_initial_conditions",
    "bohmian::limiting_trajectory",
    "thermal::partition_function",
    "thermal::wigner_stationary",
    "thermal::wigner_thermal",
    "thermal::purity_thermal_numeric",
    "thermal::purity_closed_form",
    "thermal::purity_hypergeometric_reduction_check",
    "thermal::wigner_thermal_lowt",
    "flow::thermal_currents",
    "flow::classical_currents",
    "flow::pure_state_current_k",
    "flow::divergence_w_thermal",
    "flow::find_stagnation_points",
    "flow::loop_flux",
    "flow::continuity_residual_field",
];
