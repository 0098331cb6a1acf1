use num_complex::Complex64;
use proptest::prelude::*;
use sophase::bohmian::density_cdf;
use sophase::flow::{classical_currents, thermal_currents};
use sophase::pure_state::{potential, WavepacketParams};
use sophase::specfun::{
    assoc_laguerre, assoc_laguerre_explicit, bessel_i_scaled_unchecked, erf_complex,
};
use sophase::thermal::{
    partition_function, partition_sum, partition_tail_bound, wigner_thermal,
    wigner_thermal_boltzmann, ThermalState,
};
use sophase::HalfIntOrder;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_three_term_recurrence(t in 0i32..12, z in 0.05f64..60.0) {
        // I_{ν−1} − I_{ν+1} = (2ν/z) I_ν, scaled by e^{−z} on both sides
        let twice = 2 * t + 1;
        let nu = twice as f64 / 2.0;
        let lhs = bessel_i_scaled_unchecked(twice - 2, z) - bessel_i_scaled_unchecked(twice + 2, z);
        let rhs = 2.0 * nu / z * bessel_i_scaled_unchecked(twice, z);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (bessel_i_scaled_unchecked(twice - 2, z).abs() + rhs.abs()));
    }

    #[test]
    fn laguerre_recurrence_agrees_with_explicit_sum(n in 0usize..12, a in 0.5f64..8.0, x in 0.0f64..4.0) {
        let r = assoc_laguerre(n, a, x).unwrap();
        let e = assoc_laguerre_explicit(n, a, x);
        prop_assert!((r - e).abs() <= 1e-10 * (1.0 + r.abs()));
    }

    #[test]
    fn erf_is_odd_and_real_on_the_real_axis(re in -5.0f64..5.0, im in -3.0f64..3.0) {
        let w = Complex64::new(re, im);
        let f = erf_complex(w).unwrap();
        let g = erf_complex(-w).unwrap();
        let h = erf_complex(w.conj()).unwrap();
        prop_assert!((f + g).norm() <= 1e-13 * (1.0 + f.norm()));
        prop_assert!((f.conj() - h).norm() <= 1e-13 * (1.0 + f.norm()));
    }

    #[test]
    fn partition_sum_plus_tail_is_exact(b in 0.1f64..5.0, n in 0usize..40) {
        let z = partition_function(b).unwrap();
        let s = partition_sum(b, n) + partition_tail_bound(b, n);
        prop_assert!(close(s, z, 1e-12));
    }

    #[test]
    fn equilibrium_cdf_is_monotone(x in 0.0f64..4.0, dx in 0.0f64..1.0, tau in 0.0f64..6.3) {
        let p = WavepacketParams::new("5/2".parse().unwrap(), 0.8, 0.3).unwrap();
        let (a, b) = (density_cdf(x, tau, &p), density_cdf(x + dx, tau, &p));
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(b >= a - 1e-15);
    }

    #[test]
    fn classical_current_is_hamiltonian(x in 0.2f64..4.0, k in -3.0f64..3.0) {
        let alpha = 2.5;
        let j = classical_currents(x, k, 1.0, alpha);
        // j_x = ∂H/∂k and j_k = −∂H/∂x for H = k²/2 + 𝒰(x)
        let h = 1e-5;
        let du = (potential(alpha, x + h) - potential(alpha, x - h)) / (2.0 * h);
        prop_assert_eq!(j.j_x, k);
        prop_assert!((j.j_k + du).abs() <= 1e-7 * (1.0 + du.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn closed_form_thermal_matches_boltzmann_sum(x in 0.2f64..3.0, k in -2.5f64..2.5, b in 0.6f64..2.0, t in 0i32..3) {
        let state = ThermalState::new(HalfIntOrder::from_twice(2 * t + 3).unwrap(), b).unwrap();
        let closed = wigner_thermal(x, k, &state).unwrap();
        let summed = wigner_thermal_boltzmann(x, k, &state, 60).unwrap();
        prop_assert!((closed - summed).abs() <= 1e-8, "{closed} vs {summed}");
    }

    #[test]
    fn thermal_current_density_matches_wigner(x in 0.3f64..3.0, k in -2.0f64..2.0, b in 0.5f64..2.0) {
        let state = ThermalState::new("7/2".parse().unwrap(), b).unwrap();
        let j = thermal_currents(x, k, &state).unwrap();
        let w = wigner_thermal(x, k, &state).unwrap();
        prop_assert!((j.w - w).abs() <= 1e-10 * (1.0 + w.abs()));
        prop_assert!((j.j_x - k * w).abs() <= 1e-12 * (1.0 + w.abs()));
    }
}
