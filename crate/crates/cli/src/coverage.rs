//! Which library operations each command reaches.

use crate::config::Command;

/// Command → operations it calls, directly or through the library.
pub fn operations(command: Command) -> &'static [&'static str] {
    match command {
        Command::PureWigner => &[
            "pure_state::wigner_pure",
            "pure_state::uv_envelope",
            "pure_state::classical_orbit",
            "pure_state::gamma_from_energy",
            "specfun::finite_fourier_quad",
        ],
        Command::BohmTraj => &[
            "bohmian::bohm_trajectory",
            "bohmian::classical_matching_x0",
            "bohmian::special_initial_conditions",
            "bohmian::limiting_trajectory",
            "bohmian::quantum_phase",
            "bohmian::velocity_field",
            "bohmian::quantum_potential",
            "bohmian::quantum_force",
            "pure_state::classical_orbit",
            "pure_state::gamma_from_energy",
            "pure_state::uv_envelope",
        ],
        Command::QuantumForce => &[
            "bohmian::quantum_potential",
            "bohmian::quantum_force",
            "pure_state::wavepacket_density",
            "pure_state::gamma_from_energy",
        ],
        Command::ThermalWigner => &[
            "thermal::wigner_thermal",
            "thermal::wigner_stationary",
            "thermal::partition_function",
            "specfun::bessel_i",
            "specfun::assoc_laguerre",
            "specfun::finite_fourier_quad",
        ],
        Command::Currents => &[
            "flow::thermal_currents",
            "flow::classical_currents",
            "flow::pure_state_current_k",
            "thermal::wigner_thermal",
            "pure_state::wigner_pure",
            "specfun::bessel_i_ratio_recurrence",
        ],
        Command::Divergence => &[
            "flow::divergence_w_thermal",
            "flow::continuity_residual_field",
            "flow::thermal_currents",
            "specfun::bessel_i_ratio_recurrence",
        ],
        Command::Stagnation => &[
            "flow::find_stagnation_points",
            "flow::thermal_currents",
            "flow::classical_currents",
        ],
        Command::LoopFlux => &[
            "flow::loop_flux",
            "flow::thermal_currents",
            "pure_state::classical_orbit",
        ],
        Command::Purity => &[
            "thermal::purity_thermal_numeric",
            "thermal::purity_closed_form",
            "thermal::purity_hypergeometric_reduction_check",
            "specfun::hyp2f1",
        ],
        Command::Partition => &["thermal::partition_function"],
        Command::LowTCheck => &[
            "thermal::wigner_thermal_lowt",
            "thermal::wigner_thermal",
            "specfun::erf_complex",
        ],
        Command::Figures => &[],
    }
}
