//! Bohmian description of the quasi-gaussian state: phase, velocity field,
//! trajectories, quantum potential and quantum force.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr as statrs_gamma_lr, ln_gamma};

use crate::error::{Error, Result};
use crate::pure_state::{delta, uv_envelope, WavepacketParams};

/// 𝒮_α = (1+α) arctan(v/(1+u)) − v x²/2 − τ/2.
pub fn quantum_phase(x: f64, tau: f64, params: &WavepacketParams) -> f64 {
    let e = uv_envelope(tau, params);
    (e.v / (1.0 + e.u)).atan() * (1.0 + params.alpha()) - 0.5 * e.v * x * x - 0.5 * tau
}

/// Bohmian velocity ∂_x𝒮/2 = −v(τ) x / 2. Independent of α.
pub fn velocity_field(x: f64, tau: f64, params: &WavepacketParams) -> f64 {
    -0.5 * uv_envelope(tau, params).v * x
}

/// x(τ) = x₀ √((cosh γ − cos τ)/(cosh γ − 1)), the flow of [`velocity_field`]
/// for φ = 0.
pub fn bohm_trajectory(tau: f64, x0: f64, gamma: f64) -> f64 {
    let ch = gamma.cosh();
    // cosh γ − 1 = 2 sinh²(γ/2) keeps digits for small γ
    let den = 2.0 * (0.5 * gamma).sinh().powi(2);
    x0 * ((ch - tau.cos()) / den).sqrt()
}

/// Same flow for an arbitrary phase offset φ.
pub fn bohm_trajectory_phi(tau: f64, x0: f64, params: &WavepacketParams) -> f64 {
    let ch = params.gamma.cosh();
    x0 * ((ch - (tau + params.phi).cos()) / (ch - params.phi.cos())).sqrt()
}

/// x₀ = √(α + ε − Δ): the start point whose Bohmian path coincides with the
/// classical orbit of energy ε at ϑ = π.
pub fn classical_matching_x0(alpha: f64, epsilon: f64) -> Result<f64> {
    if !(alpha >= 0.5) || !(epsilon >= 0.0) {
        return Err(Error::domain(
            "classical_matching_x0",
            format!("need alpha >= 1/2 and epsilon >= 0, got ({alpha}, {epsilon})"),
        ));
    }
    let x2 = alpha + epsilon - delta(alpha, epsilon);
    if !(x2 > 0.0) {
        return Err(Error::domain(
            "classical_matching_x0",
            format!("alpha + epsilon - Delta = {x2} <= 0"),
        ));
    }
    Ok(x2.sqrt())
}

/// 𝒬 = −½(x²u² − 2(1+α)u + (4α²−1)/(4x²)).
pub fn quantum_potential(x: f64, tau: f64, params: &WavepacketParams) -> f64 {
    let a = params.alpha();
    let u = uv_envelope(tau, params).u;
    -0.5 * (x * x * u * u - 2.0 * (1.0 + a) * u + (4.0 * a * a - 1.0) / (4.0 * x * x))
}

/// F_q = −∂_x𝒬 = x u² − (4α²−1)/(4x³).
pub fn quantum_force(x: f64, tau: f64, params: &WavepacketParams) -> f64 {
    let a = params.alpha();
    let u = uv_envelope(tau, params).u;
    x * u * u - (4.0 * a * a - 1.0) / (4.0 * x * x * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumPotentialSample {
    pub x: f64,
    pub tau: f64,
    pub q_value: f64,
    pub force: f64,
}

pub fn quantum_potential_sample(
    x: f64,
    tau: f64,
    params: &WavepacketParams,
) -> QuantumPotentialSample {
    QuantumPotentialSample {
        x,
        tau,
        q_value: quantum_potential(x, tau, params),
        force: quantum_force(x, tau, params),
    }
}

/// Start points tied to the initial packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialConditions {
    /// peak of |𝒢_α(x, 0)|²
    pub center: f64,
    /// ⟨x⟩ at τ = 0; its Bohmian path tracks ⟨x⟩(τ)
    pub mean: f64,
}

pub fn special_initial_conditions(alpha: f64, gamma: f64, phi: f64) -> Result<InitialConditions> {
    if !(alpha >= 0.5) {
        return Err(Error::domain(
            "special_initial_conditions",
            format!("alpha = {alpha} must be >= 1/2"),
        ));
    }
    if !(gamma > 0.0) {
        return Err(Error::domain(
            "special_initial_conditions",
            format!("gamma = {gamma} must be positive"),
        ));
    }
    let u0 = gamma.sinh() / (gamma.cosh() - phi.cos());
    let s = u0.powf(-0.5);
    Ok(InitialConditions {
        center: s * (alpha + 0.5).sqrt(),
        mean: s * (ln_gamma(1.5 + alpha) - ln_gamma(1.0 + alpha)).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    ElasticCollision,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighEnergyLimit {
    pub c0: f64,
    pub kind: LimitKind,
}

/// Asymptotic γ ≪ 1 paths: C₀|sin(τ/2)| (elastic collision with the wall at
/// the origin) or C₀ sin(τ/2) (the harmonic continuation through it).
pub fn limiting_trajectory(tau: f64, limit: &HighEnergyLimit) -> Result<f64> {
    if !(limit.c0 > 0.0) {
        return Err(Error::domain(
            "limiting_trajectory",
            format!("c0 = {} must be positive", limit.c0),
        ));
    }
    let s = (0.5 * tau).sin();
    Ok(match limit.kind {
        LimitKind::ElasticCollision => limit.c0 * s.abs(),
        LimitKind::Harmonic => limit.c0 * s,
    })
}

/// An ordered path (τ, x[, k]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub label: String,
    pub tau: Vec<f64>,
    pub x: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<f64>>,
}

/// Closed-form Bohmian path sampled at the given times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohmianTrajectory {
    pub x0: f64,
    pub gamma: f64,
    pub samples: Vec<(f64, f64)>,
}

impl BohmianTrajectory {
    pub fn sample(x0: f64, params: &WavepacketParams, taus: &[f64]) -> Result<Self> {
        if !(x0 > 0.0) {
            return Err(Error::domain(
                "bohm_trajectory",
                format!("x0 = {x0} must be positive"),
            ));
        }
        let samples = taus
            .iter()
            .map(|&t| (t, bohm_trajectory_phi(t, x0, params)))
            .collect();
        Ok(Self {
            x0,
            gamma: params.gamma,
            samples,
        })
    }
}

/// Fixed-step classical RK4 for dx/dτ = velocity_field(x, τ) from τ = 0.
/// Returns the state at every step, including the start.
pub fn integrate_rk4(
    x0: f64,
    params: &WavepacketParams,
    tau_end: f64,
    steps: usize,
) -> Vec<(f64, f64)> {
    let h = tau_end / steps as f64;
    let f = |t: f64, x: f64| velocity_field(x, t, params);
    let mut out = Vec::with_capacity(steps + 1);
    let (mut t, mut x) = (0.0, x0);
    out.push((t, x));
    for n in 0..steps {
        let k1 = f(t, x);
        let k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
        let k4 = f(t + h, x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (n + 1) as f64 * h;
        out.push((t, x));
    }
    out
}

// statrs rejects x = 0 although P(a, 0) = 0 is well defined
fn gamma_lr(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        statrs_gamma_lr(a, x)
    }
}

/// Draws start points from |𝒢_α(·, 0)|² (quantum equilibrium) by inverse CDF
/// on a tabulated distribution function.
///
/// With t = u x² the density becomes the Gamma(α+1) law, so the table is built
/// in t from the regularized incomplete gamma function.
pub struct EquilibriumSampler {
    u0: f64,
    t: Vec<f64>,
    cdf: Vec<f64>,
}

impl EquilibriumSampler {
    pub const TABLE_SIZE: usize = 10_000;

    pub fn new(params: &WavepacketParams) -> Self {
        let a = params.alpha();
        let u0 = uv_envelope(0.0, params).u;
        // the Gamma(α+1) tail beyond t_max is below 1e-16
        let mut t_max = a + 1.0;
        while 1.0 - gamma_lr(a + 1.0, t_max) > 1e-16 {
            t_max *= 1.2;
        }
        let n = Self::TABLE_SIZE;
        let t: Vec<f64> = (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect();
        let mut cdf: Vec<f64> = t.iter().map(|&t| gamma_lr(a + 1.0, t)).collect();
        cdf[n - 1] = 1.0;
        Self { u0, t, cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p: f64 = rng.gen();
        let i = self
            .cdf
            .partition_point(|&c| c < p)
            .clamp(1, self.t.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let frac = if c1 > c0 { (p - c0) / (c1 - c0) } else { 0.0 };
        let t = self.t[i - 1] + frac * (self.t[i] - self.t[i - 1]);
        (t / self.u0).sqrt()
    }
}

/// Analytic distribution function of |𝒢_α(·, τ)|².
pub fn density_cdf(x: f64, tau: f64, params: &WavepacketParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let u = uv_envelope(tau, params).u;
    gamma_lr(params.alpha() + 1.0, u * x * x)
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic KS critical value at significance 1%.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// The (x, τ) path for one full period starting at x0.
pub fn period_samples(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure_state::{
        classical_orbit, gamma_from_energy, wavepacket_density, ClassicalOrbit,
    };
    use crate::specfun::HalfIntOrder;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(alpha: &str, gamma: f64) -> WavepacketParams {
        WavepacketParams::new(alpha.parse().unwrap(), gamma, 0.0).unwrap()
    }

    #[test]
    fn phase_examples() {
        let p = params("3/2", 3f64.ln());
        assert_eq!(quantum_phase(1.7, 0.0, &p), 0.0);
        assert_relative_eq!(quantum_phase(1.0, PI, &p), -PI / 2.0, max_relative = 1e-14);
        // ∂_x𝒮 = −v x
        let (t, x, h) = (PI / 2.0, 1.3, 1e-5);
        let d = (quantum_phase(x + h, t, &p) - quantum_phase(x - h, t, &p)) / (2.0 * h);
        let v = uv_envelope(t, &p).v;
        assert!((d + v * x).abs() < 1e-8);
    }

    #[test]
    fn velocity_examples() {
        let p = params("3/2", 3f64.ln());
        assert_eq!(velocity_field(2.0, 0.0, &p), 0.0);
        assert_relative_eq!(velocity_field(1.0, PI / 2.0, &p), 0.3, max_relative = 1e-14);
        let q = params("11/2", 3f64.ln());
        assert_eq!(velocity_field(1.0, 0.9, &p), velocity_field(1.0, 0.9, &q));
    }

    #[test]
    fn trajectory_examples() {
        let g = 3f64.ln();
        assert_eq!(bohm_trajectory(0.0, 0.7, g), 0.7);
        assert_relative_eq!(bohm_trajectory(PI, 0.7, g), 1.4, max_relative = 1e-14);
        assert_relative_eq!(bohm_trajectory(TAU, 0.7, g), 0.7, max_relative = 1e-14);
    }

    #[test]
    fn matching_examples() {
        assert_relative_eq!(
            classical_matching_x0(1.5, 0.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            classical_matching_x0(1.5, 0.5).unwrap(),
            0.7653668647301796,
            max_relative = 1e-14
        );
        for (a, eps) in [(1.5, 0.2), (5.5, 1.3), (2.5, 0.0)] {
            let x0 = classical_matching_x0(a, eps).unwrap();
            let g = gamma_from_energy(a, eps).unwrap();
            let orbit = ClassicalOrbit::new(a, eps, PI).unwrap();
            for i in 0..=64 {
                let t = TAU * i as f64 / 64.0;
                let (xc, _) = classical_orbit(t, &orbit).unwrap();
                assert!((bohm_trajectory(t, x0, g) - xc).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_matching_starts_at_origin() {
        // α = 1/2 gives Δ = ε + 1/2, so the matched start point sits on the wall
        assert!(classical_matching_x0(0.5, 0.7).is_err());
    }

    #[test]
    fn potential_and_force_examples() {
        // u(0) = 1 requires cos φ = cosh γ − sinh γ = e^{−γ}
        let g: f64 = 1.0;
        let phi = (-g).exp().acos();
        let p = WavepacketParams::new(HalfIntOrder::HALF, g, phi).unwrap();
        assert_relative_eq!(uv_envelope(0.0, &p).u, 1.0, max_relative = 1e-14);
        assert_relative_eq!(quantum_potential(1.0, 0.0, &p), 1.0, max_relative = 1e-14);
        assert_relative_eq!(quantum_force(1.0, 0.0, &p), 1.0, max_relative = 1e-14);
        // u(0) = 2 for γ = ln 3; x = 0.5 sits below the ridge u x² = √2
        let q = params("3/2", 3f64.ln());
        assert!(quantum_force(0.5, 0.0, &q) < 0.0);
    }

    #[test]
    fn potential_matches_density_curvature() {
        let p = params("3/2", 3f64.ln());
        let (x, t, h) = (1.2, 0.4, 1e-4);
        let r = |x: f64| wavepacket_density(x, t, &p).sqrt();
        let d2 = (r(x + h) - 2.0 * r(x) + r(x - h)) / (h * h);
        let q = -0.5 * d2 / r(x);
        assert!((q - quantum_potential(x, t, &p)).abs() < 1e-6);
        let f = -(quantum_potential(x + h, t, &p) - quantum_potential(x - h, t, &p)) / (2.0 * h);
        assert!((f - quantum_force(x, t, &p)).abs() < 1e-7);
    }

    #[test]
    fn force_vanishes_on_ridge_curve() {
        let p = params("5/2", 0.9);
        let a = 2.5f64;
        for i in 0..100 {
            let t = TAU * i as f64 / 100.0;
            let u = uv_envelope(t, &p).u;
            let x = ((4.0 * a * a - 1.0).sqrt() / (2.0 * u)).sqrt();
            assert!(quantum_force(x, t, &p).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_conditions() {
        // u(0) = 2 with φ = 0 needs sinh γ/(cosh γ − 1) = coth(γ/2) = 2
        let g = 2.0 * (0.5f64).atanh();
        let ic = special_initial_conditions(0.5, g, 0.0).unwrap();
        assert_relative_eq!(ic.center, 0.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(ic.mean, 0.7978845608028654, max_relative = 1e-13);
        let mut prev = f64::INFINITY;
        for a in [1.5, 5.5, 25.5] {
            let ic = special_initial_conditions(a, g, 0.0).unwrap();
            let gap = ic.mean - ic.center;
            assert!(gap > 0.0 && gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn limits() {
        for kind in [LimitKind::ElasticCollision, LimitKind::Harmonic] {
            let l = HighEnergyLimit { c0: 2.0, kind };
            assert_eq!(limiting_trajectory(0.0, &l).unwrap(), 0.0);
        }
        let l = HighEnergyLimit {
            c0: 2.0,
            kind: LimitKind::ElasticCollision,
        };
        assert_relative_eq!(
            limiting_trajectory(3.0 * PI, &l).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert!(limiting_trajectory(
            1.0,
            &HighEnergyLimit {
                c0: 0.0,
                kind: LimitKind::Harmonic
            }
        )
        .is_err());
    }

    #[test]
    fn rk4_reproduces_closed_form() {
        let p = params("3/2", 3f64.ln());
        let path = integrate_rk4(0.8, &p, TAU, 10_000);
        for &(t, x) in path.iter().step_by(97) {
            assert!((x - bohm_trajectory(t, 0.8, p.gamma)).abs() < 1e-6);
        }
    }

    #[test]
    fn trajectories_do_not_cross() {
        let p = params("3/2", 0.7);
        let a = BohmianTrajectory::sample(0.5, &p, &period_samples(128)).unwrap();
        let b = BohmianTrajectory::sample(0.51, &p, &period_samples(128)).unwrap();
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            assert!(sa.1 < sb.1 && sa.1 > 0.0);
        }
    }

    #[test]
    fn sampler_follows_equilibrium_density() {
        use rand::SeedableRng;
        let alpha: HalfIntOrder = "3/2".parse().unwrap();
        let g = gamma_from_energy(alpha.value(), 0.2).unwrap();
        let p = WavepacketParams::new(alpha, g, 0.0).unwrap();
        let sampler = EquilibriumSampler::new(&p);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 20_000;
        let xs: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        assert!(xs.iter().all(|x| x.is_finite() && *x >= 0.0));
        // empirical distribution against the analytic one at a few quantiles
        for x0 in [0.5, 1.0, 1.5, 2.0] {
            let frac = xs.iter().filter(|&&x| x < x0).count() as f64 / n as f64;
            assert!((frac - density_cdf(x0, 0.0, &p)).abs() < 0.015);
        }
    }
}
