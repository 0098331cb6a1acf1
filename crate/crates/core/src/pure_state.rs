//! The quasi-gaussian pure state, its Wigner function and the classical orbits
//! its ridge follows.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::specfun::{Estimate, FourierQuad, HalfIntOrder, QuadratureRule, LADDER};

/// Parameters (α, γ, φ) of the quasi-gaussian superposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavepacketParams {
    pub alpha: HalfIntOrder,
    pub gamma: f64,
    pub phi: f64,
}

impl WavepacketParams {
    pub fn new(alpha: HalfIntOrder, gamma: f64, phi: f64) -> Result<Self> {
        if alpha.twice() < 1 {
            return Err(Error::domain(
                "wavepacket",
                format!("alpha = {alpha} must be >= 1/2"),
            ));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain(
                "wavepacket",
                format!("gamma = {gamma} must be positive"),
            ));
        }
        if !phi.is_finite() {
            return Err(Error::domain("wavepacket", "phi must be finite"));
        }
        Ok(Self {
            alpha,
            gamma,
            phi: phi.rem_euclid(TAU),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }
}

/// Width and tilt of the envelope at time τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeState {
    pub u: f64,
    pub v: f64,
    pub tau: f64,
}

/// u = sinh γ / (cosh γ − cos(τ+φ)), v = −sin(τ+φ) / (cosh γ − cos(τ+φ)).
///
/// The phase offset enters both functions through the same shift τ → τ + φ.
pub fn uv_envelope(tau: f64, params: &WavepacketParams) -> EnvelopeState {
    let g = params.gamma;
    let (s, c) = (tau + params.phi).sin_cos();
    let den = g.cosh() - c;
    EnvelopeState {
        u: g.sinh() / den,
        v: -s / den,
        tau,
    }
}

/// Probability density |𝒢_α(x, τ)|² = 2u^{1+α} x^{1+2α} e^{−ux²} / Γ(1+α).
pub fn wavepacket_density(x: f64, tau: f64, params: &WavepacketParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let a = params.alpha();
    let u = uv_envelope(tau, params).u;
    let log =
        2f64.ln() + (1.0 + a) * u.ln() + (1.0 + 2.0 * a) * x.ln() - u * x * x - ln_gamma(1.0 + a);
    log.exp()
}

/// Pure-state Wigner function 𝒲(x, k; τ).
pub fn wigner_pure(x: f64, k: f64, tau: f64, params: &WavepacketParams) -> Result<f64> {
    wigner_pure_estimate(x, k, tau, params).map(|e| e.value)
}

/// As [`wigner_pure`], with the quadrature error estimate.
pub fn wigner_pure_estimate(
    x: f64,
    k: f64,
    tau: f64,
    params: &WavepacketParams,
) -> Result<Estimate<f64>> {
    let env = uv_envelope(tau, params);
    let kernel = PureKernel::new(x, k, env, params);
    let [w] = kernel.integrate(|_| [1.0])?;
    Ok(w)
}

/// Shared pieces of the s-integral behind the pure-state Wigner function:
/// prefactor, kernel (1−s²)^{1/2+α} e^{−ux²s²} and frequency 2x(k + vx).
pub(crate) struct PureKernel {
    pub x: f64,
    pub prefactor: f64,
    pub omega: f64,
    pub ux2: f64,
    pub power: i32,
}

impl PureKernel {
    pub fn new(x: f64, k: f64, env: EnvelopeState, params: &WavepacketParams) -> Self {
        let a = params.alpha();
        let u = env.u;
        let log_pre = 2f64.ln() + (1.0 + a) * u.ln() - PI.ln() - ln_gamma(1.0 + a)
            + (2.0 + 2.0 * a) * x.ln()
            - u * x * x;
        Self {
            x,
            prefactor: if x > 0.0 { log_pre.exp() } else { 0.0 },
            omega: 2.0 * x * (k + env.v * x),
            ux2: u * x * x,
            // 1/2 + α is an integer for half-integer α
            power: (params.alpha.twice() + 1) / 2,
        }
    }

    /// prefactor · ∫ ds (1−s²)^{1/2+α} e^{−ux²s²} m_j(s) e^{iωs} for each
    /// multiplier m_j.
    pub fn integrate<const N: usize>(
        &self,
        mult: impl Fn(f64) -> [f64; N],
    ) -> Result<[Estimate<f64>; N]> {
        if self.x <= 0.0 {
            return Ok([Estimate {
                value: 0.0,
                error: 0.0,
            }; N]);
        }
        let est = FourierQuad::default().integrate_multi(
            |s| {
                let base = (1.0 - s * s).powi(self.power) * (-self.ux2 * s * s).exp();
                mult(s).map(|m| m * base)
            },
            self.omega,
            "wigner_pure",
        )?;
        let mut out = [Estimate {
            value: 0.0,
            error: 0.0,
        }; N];
        for (o, v) in out.iter_mut().zip(est.value) {
            check_real(v, "wigner_pure")?;
            *o = Estimate {
                value: self.prefactor * v.re,
                error: self.prefactor * est.error,
            };
        }
        Ok(out)
    }
}

pub(crate) fn check_real(v: Complex64, what: &'static str) -> Result<()> {
    if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
        return Err(Error::Accuracy {
            what,
            estimate: v.im.abs(),
        });
    }
    Ok(())
}

/// A classical orbit of energy ε with phase ϑ; Δ and γ are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalOrbit {
    pub alpha: f64,
    pub epsilon: f64,
    pub theta: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl ClassicalOrbit {
    pub fn new(alpha: f64, epsilon: f64, theta: f64) -> Result<Self> {
        if !(alpha >= 0.5) {
            return Err(Error::domain(
                "classical orbit",
                format!("alpha = {alpha} must be >= 1/2"),
            ));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(
                "classical orbit",
                format!("epsilon = {epsilon} must be >= 0"),
            ));
        }
        Ok(Self {
            alpha,
            epsilon,
            theta,
            delta: delta(alpha, epsilon),
            gamma: gamma_from_energy(alpha, epsilon)?,
        })
    }

    /// The potential 𝒰(x) = ½(x² + (4α²−1)/(4x²) − 2α).
    pub fn potential(&self, x: f64) -> f64 {
        potential(self.alpha, x)
    }

    pub fn energy_at(&self, x: f64, k: f64) -> f64 {
        0.5 * k * k + self.potential(x)
    }
}

/// Δ = √(ε² + 2αε + 1/4).
pub fn delta(alpha: f64, epsilon: f64) -> f64 {
    (epsilon * epsilon + 2.0 * alpha * epsilon + 0.25).sqrt()
}

pub fn potential(alpha: f64, x: f64) -> f64 {
    0.5 * (x * x + (4.0 * alpha * alpha - 1.0) / (4.0 * x * x) - 2.0 * alpha)
}

/// 𝒰′(x) = x − (4α²−1)/(4x³).
pub fn potential_derivative(alpha: f64, x: f64) -> f64 {
    x - (4.0 * alpha * alpha - 1.0) / (4.0 * x * x * x)
}

/// (x_C, k_C) at time τ.
///
/// x_C = √(α + ε + Δ cos(τ+ϑ)) and k_C = 2 dx_C/dτ = −Δ sin(τ+ϑ)/x_C, which is
/// the momentum Hamilton's equations assign to this x_C.
pub fn classical_orbit(tau: f64, orbit: &ClassicalOrbit) -> Result<(f64, f64)> {
    let (s, c) = (tau + orbit.theta).sin_cos();
    let x2 = orbit.alpha + orbit.epsilon + orbit.delta * c;
    if !(x2 > 0.0) {
        return Err(Error::domain(
            "classical_orbit",
            format!("x_C^2 = {x2} is not positive"),
        ));
    }
    let x = x2.sqrt();
    Ok((x, -orbit.delta * s / x))
}

/// γ = arccosh((α + ε)/Δ).
pub fn gamma_from_energy(alpha: f64, epsilon: f64) -> Result<f64> {
    if !(alpha >= 0.5) || !(epsilon >= 0.0) {
        return Err(Error::domain(
            "gamma_from_energy",
            format!("need alpha >= 1/2 and epsilon >= 0, got ({alpha}, {epsilon})"),
        ));
    }
    let ratio = (alpha + epsilon) / delta(alpha, epsilon);
    if !(ratio >= 1.0) {
        return Err(Error::domain(
            "gamma_from_energy",
            format!("(alpha+epsilon)/Delta = {ratio} < 1"),
        ));
    }
    Ok(ratio.acosh())
}

/// Phase-space integrals ∫∫𝒲 and ∫∫𝒲² at time τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceMoments {
    pub norm: f64,
    pub square: f64,
}

/// k half-width at which the norm truncation drops to about 1e−7. The
/// truncation error falls like K⁻⁵ (halving K costs about 30×).
pub const MOMENT_K_HALF: f64 = 30.0;

/// Tensor Gauss–Legendre integration of 𝒲 and 𝒲² over the state's support.
///
/// The x-range stops where x^{2+2α}e^{−u x²} drops below 1e−16 of its peak;
/// the k-window is centred on the ridge k = −vx with half-width `k_half`.
/// The k-tails of 𝒲 only decay algebraically (the state vanishes like a power
/// at the origin), so `k_half` controls the truncation error of the norm.
pub fn phase_space_moments(
    tau: f64,
    params: &WavepacketParams,
    k_half: f64,
) -> Result<PhaseSpaceMoments> {
    use rayon::prelude::*;

    let env = uv_envelope(tau, params);
    let a = params.alpha();
    let x_hi = support_radius(env.u, a);
    let x_panels = 24;
    let rule = QuadratureRule::cached(LADDER.iter().position(|&n| n == 32).unwrap());
    let mut nodes = Vec::new();
    for p in 0..x_panels {
        let (lo, hi) = (
            x_hi * p as f64 / x_panels as f64,
            x_hi * (p + 1) as f64 / x_panels as f64,
        );
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            nodes.push((0.5 * (lo + hi) + 0.5 * (hi - lo) * s, 0.5 * (hi - lo) * w));
        }
    }
    let rows: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&(x, wx)| {
            let centre = -env.v * x;
            // resolve the e^{2ixsk} oscillation: ≥ 8 nodes per period 2π/(2x)
            let periods = 2.0 * k_half * x / PI;
            let k_panels = ((periods * 8.0 / 32.0).ceil() as usize).max(8);
            let mut n = 0.0;
            let mut sq = 0.0;
            for p in 0..k_panels {
                let lo = centre - k_half + 2.0 * k_half * p as f64 / k_panels as f64;
                let hi = lo + 2.0 * k_half / k_panels as f64;
                for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let k = 0.5 * (lo + hi) + 0.5 * (hi - lo) * s;
                    let wk = 0.5 * (hi - lo) * w;
                    let v = wigner_pure(x, k, tau, params)?;
                    n += wk * v;
                    sq += wk * v * v;
                }
            }
            Ok((wx * n, wx * sq))
        })
        .collect::<Result<_>>()?;
    let (norm, square) = rows
        .iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    Ok(PhaseSpaceMoments { norm, square })
}

/// Smallest x beyond which x^{2+2α} e^{−ux²} is below 1e−16 of its maximum.
pub(crate) fn support_radius(u: f64, alpha: f64) -> f64 {
    let p = 2.0 + 2.0 * alpha;
    let peak = (p / (2.0 * u)).sqrt();
    let log_peak = p * peak.ln() - u * peak * peak;
    let mut x = peak;
    while p * x.ln() - u * x * x > log_peak - 16.0 * 10f64.ln() {
        x += 0.05 * peak;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(gamma: f64) -> WavepacketParams {
        WavepacketParams::new("3/2".parse().unwrap(), gamma, 0.0).unwrap()
    }

    #[test]
    fn moments_with_a_narrow_window() {
        let m = phase_space_moments(0.0, &params(3f64.ln()), 10.0).unwrap();
        assert!((m.norm - 1.0).abs() < 1e-4, "{m:?}");
        assert!((m.square - 0.5 / PI).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn envelope_examples() {
        let p = params(3f64.ln());
        let e = uv_envelope(0.0, &p);
        assert_relative_eq!(e.u, 2.0, max_relative = 1e-15);
        assert_eq!(e.v, 0.0);
        let e = uv_envelope(PI, &p);
        assert_relative_eq!(e.u, 0.5, max_relative = 1e-15);
        assert!(e.v.abs() < 1e-16);
        let lo = (p.gamma / 2.0).tanh();
        let hi = 1.0 / lo;
        for i in 0..50 {
            let u = uv_envelope(0.3 * i as f64, &p).u;
            assert!(u >= lo * (1.0 - 1e-14) && u <= hi * (1.0 + 1e-14));
        }
    }

    #[test]
    fn parameter_validation() {
        let a: HalfIntOrder = "3/2".parse().unwrap();
        assert!(WavepacketParams::new(a, 0.0, 0.0).is_err());
        assert!(WavepacketParams::new(a, -0.1, 0.0).is_err());
        assert!(WavepacketParams::new("-1/2".parse().unwrap(), 1.0, 0.0).is_err());
        assert_relative_eq!(WavepacketParams::new(a, 1.0, 7.0).unwrap().phi, 7.0 - TAU);
    }

    #[test]
    fn density_peak_and_origin() {
        let p = params(3f64.ln());
        assert_eq!(wavepacket_density(0.0, 0.0, &p), 0.0);
        assert!(wavepacket_density(1e-6, 0.0, &p) < 1e-15);
        // u(0) = 2, α = 3/2: peak at √(2/2) = 1
        let h = 1e-5;
        let d = |x: f64| wavepacket_density(x, 0.0, &p).ln();
        assert!(((d(1.0 + h) - d(1.0 - h)) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn density_normalized() {
        let p = params(3f64.ln());
        let opts = FourierQuad::default();
        let e =
            crate::specfun::integrate(|x| wavepacket_density(x, 0.7, &p), 0.0, 12.0, &opts, "t")
                .unwrap();
        assert_relative_eq!(e.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn orbit_examples() {
        let o = ClassicalOrbit::new(1.5, 0.5, 0.0).unwrap();
        assert_relative_eq!(o.delta, 2f64.sqrt(), max_relative = 1e-15);
        let (x, k) = classical_orbit(0.0, &o).unwrap();
        assert_relative_eq!(x, 1.8477590650225735, max_relative = 1e-15);
        assert_eq!(k, 0.0);
        for i in 0..100 {
            let t = TAU * i as f64 / 100.0;
            let (x, k) = classical_orbit(t, &o).unwrap();
            assert_relative_eq!(o.energy_at(x, k), 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn orbit_obeys_hamilton() {
        // dx/dτ = k/2 and dk/dτ = −𝒰′/2
        let o = ClassicalOrbit::new(2.5, 0.8, 0.3).unwrap();
        let h = 1e-5;
        for t in [0.2, 1.4, 3.0, 5.1] {
            let (x, k) = classical_orbit(t, &o).unwrap();
            let (xp, kp) = classical_orbit(t + h, &o).unwrap();
            let (xm, km) = classical_orbit(t - h, &o).unwrap();
            assert!(((xp - xm) / (2.0 * h) - k / 2.0).abs() < 1e-8);
            assert!(((kp - km) / (2.0 * h) + potential_derivative(2.5, x) / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn gamma_examples() {
        assert_relative_eq!(
            gamma_from_energy(1.5, 0.5).unwrap(),
            0.881373587019543,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gamma_from_energy(1.5, 0.0).unwrap(),
            1.762747174039086,
            max_relative = 1e-14
        );
        for eps in [0.0, 0.2, 1.0, 7.5] {
            let g = gamma_from_energy(2.5, eps).unwrap();
            assert!((g.cosh() * delta(2.5, eps) - (2.5 + eps)).abs() < 1e-12);
        }
        assert!(gamma_from_energy(0.2, 1.0).is_err());
    }

    #[test]
    fn wigner_is_periodic() {
        let p = params(3f64.ln());
        let a = wigner_pure(1.1, 0.4, 0.8, &p).unwrap();
        let b = wigner_pure(1.1, 0.4, 0.8 + TAU, &p).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn marginal_reproduces_density() {
        let p = params(3f64.ln());
        for x in [0.6, 1.0, 1.7] {
            let tau = 0.8;
            let centre = -uv_envelope(tau, &p).v * x;
            let rule = QuadratureRule::gauss_legendre(64);
            // the truncated k-window converges like K^{-3}, from the (1−s²)² endpoint of the kernel
            let m: f64 = (0..300)
                .map(|i| {
                    let lo = centre - 300.0 + 2.0 * i as f64;
                    rule.apply(lo, lo + 2.0, |k| wigner_pure(x, k, tau, &p).unwrap())
                })
                .sum();
            let want = wavepacket_density(x, tau, &p);
            assert!(
                (m - want).abs() < 1e-6 * want.max(1e-3),
                "x={x}: {m} vs {want}"
            );
        }
    }
}
