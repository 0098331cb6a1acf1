//! Thermal equilibrium: stationary-state Wigner functions, the thermalized
//! Wigner function with its Bessel kernel, partition function and purity.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::pure_state::check_real;
use crate::specfun::{
    assoc_laguerre, bessel_i, bessel_i_ratio_recurrence, bessel_i_scaled_unchecked, hyp2f1,
    integrate, integrate_par, Estimate, FourierQuad, HalfIntOrder, Jet,
};

/// Equilibrium state at dimensionless inverse temperature b = βħω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    pub alpha: HalfIntOrder,
    pub b: f64,
}

impl ThermalState {
    pub fn new(alpha: HalfIntOrder, b: f64) -> Result<Self> {
        if alpha.twice() < 1 {
            return Err(Error::domain(
                "thermal state",
                format!("alpha = {alpha} must be >= 1/2"),
            ));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::domain(
                "thermal state",
                format!("b = {b} must be positive"),
            ));
        }
        Ok(Self { alpha, b })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }

    /// ζ = coth b
    pub fn zeta(&self) -> f64 {
        1.0 / self.b.tanh()
    }
}

/// Energy level ε_n = 2n + 1 with its normalization N_n^{(α)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryState {
    pub n: usize,
    pub alpha: HalfIntOrder,
}

impl StationaryState {
    pub fn energy(&self) -> f64 {
        2.0 * self.n as f64 + 1.0
    }

    /// N_n^{(α)} = √(n!/Γ(n+α+1))
    pub fn normalization(&self) -> f64 {
        (0.5 * (ln_gamma(self.n as f64 + 1.0) - ln_gamma(self.n as f64 + self.alpha.value() + 1.0)))
            .exp()
    }
}

/// 𝒵(b) = Σ e^{−(2n+1)b} = 1/(2 sinh b).
pub fn partition_function(b: f64) -> Result<f64> {
    if !(b >= 1e-12) {
        return Err(Error::domain(
            "partition_function",
            format!("b = {b} must be >= 1e-12"),
        ));
    }
    Ok(0.5 / b.sinh())
}

/// Σ_{n≤N} e^{−(2n+1)b}.
pub fn partition_sum(b: f64, n_max: usize) -> f64 {
    (0..=n_max)
        .map(|n| (-(2.0 * n as f64 + 1.0) * b).exp())
        .sum()
}

/// Bound e^{−(2N+3)b}/(1 − e^{−2b}) on the tail left out of [`partition_sum`].
pub fn partition_tail_bound(b: f64, n_max: usize) -> f64 {
    (-(2.0 * n_max as f64 + 3.0) * b).exp() / (1.0 - (-2.0 * b).exp())
}

/// Smallest N with e^{−2bN} < 1e−10.
pub fn boltzmann_cutoff(b: f64) -> usize {
    (10.0 * 10f64.ln() / (2.0 * b)).floor() as usize + 1
}

/// Wigner function of the n-th eigenstate, from the direct product of the two
/// Laguerre factors.
pub fn wigner_stationary(n: usize, alpha: HalfIntOrder, x: f64, k: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let a = alpha.value();
    let st = StationaryState { n, alpha };
    let log_pre =
        (2.0 / PI).ln() + 2.0 * st.normalization().ln() + (2.0 + 2.0 * a) * x.ln() - x * x;
    let power = (alpha.twice() + 1) / 2;
    let x2 = x * x;
    let err = RefCell::new(None);
    let est = FourierQuad::default().integrate(
        |s| {
            let lp = assoc_laguerre(n, a, x2 * (1.0 + s) * (1.0 + s));
            let lm = assoc_laguerre(n, a, x2 * (1.0 - s) * (1.0 - s));
            match (lp, lm) {
                (Ok(lp), Ok(lm)) => (1.0 - s * s).powi(power) * (-x2 * s * s).exp() * lp * lm,
                (Err(e), _) | (_, Err(e)) => {
                    err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        2.0 * k * x,
        "wigner_stationary",
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let v = est?.value;
    check_real(v, "wigner_stationary")?;
    Ok(log_pre.exp() * v.re)
}

/// The same Wigner function after the Laguerre product identity
/// L_n^α(X) L_n^α(Y) = Γ(n+α+1)/n! Σ_j L_{n−j}^{α+2j}(X+Y) (XY)^j/(j! Γ(α+j+1)).
pub fn wigner_stationary_jsum(n: usize, alpha: HalfIntOrder, x: f64, k: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let a = alpha.value();
    let x2 = x * x;
    let mut total = 0.0;
    for j in 0..=n {
        let jf = j as f64;
        let log_pre = (2.0 / PI).ln() + (2.0 + 2.0 * a + 4.0 * jf) * x.ln()
            - x2
            - ln_gamma(jf + 1.0)
            - ln_gamma(a + jf + 1.0);
        let power = (alpha.twice() + 1) / 2 + 2 * j as i32;
        let est = FourierQuad::default().integrate(
            |s| {
                let l = assoc_laguerre(n - j, a + 2.0 * jf, 2.0 * x2 * (1.0 + s * s))
                    .unwrap_or(f64::NAN);
                (1.0 - s * s).powi(power) * (-x2 * s * s).exp() * l
            },
            2.0 * k * x,
            "wigner_stationary",
        )?;
        check_real(est.value, "wigner_stationary")?;
        total += log_pre.exp() * est.value.re;
    }
    Ok(total)
}

/// Thermal Wigner functions of several half-integer orders (given as 2ν) at
/// the same (x, k, b), sharing quadrature nodes.
///
/// 𝒲_Ω^ν = (2e^{νb}/π) ∫_{−x}^{x} dy e^{2iky} (x²−y²)^{1/2} e^{−coth b (x²+y²)} ℐ_ν((x²−y²)/sinh b).
/// With y = xs the Gaussian and the Bessel growth fuse into
/// e^{−x²(tanh(b/2) + s² coth(b/2))} e^{−z}ℐ_ν(z).
pub(crate) fn thermal_orders<const N: usize>(
    x: f64,
    k: f64,
    b: f64,
    orders: [i32; N],
) -> Result<[Estimate<f64>; N]> {
    thermal_orders_with(x, k, b, orders, |z| {
        orders.map(|t| {
            bessel_i(HalfIntOrder::from_twice(t).expect("odd order"), z, true).unwrap_or(f64::NAN)
        })
    })
}

/// `kernel(z)` must return e^{−z}ℐ_ν(z) for each entry of `orders`; a NaN
/// surfaces as an accuracy error.
fn thermal_orders_with<const N: usize>(
    x: f64,
    k: f64,
    b: f64,
    orders: [i32; N],
    kernel: impl Fn(f64) -> [f64; N],
) -> Result<[Estimate<f64>; N]> {
    if x <= 0.0 {
        return Ok([Estimate {
            value: 0.0,
            error: 0.0,
        }; N]);
    }
    let x2 = x * x;
    let (th, cth) = ((0.5 * b).tanh(), 1.0 / (0.5 * b).tanh());
    let inv_sinh = 1.0 / b.sinh();
    let est = FourierQuad::default().integrate_multi(
        |s| {
            let one_m = 1.0 - s * s;
            let z = x2 * one_m * inv_sinh;
            let base = one_m.sqrt() * (-x2 * (th + s * s * cth)).exp();
            kernel(z).map(|v| base * v)
        },
        2.0 * k * x,
        "wigner_thermal",
    )?;
    let mut out = [Estimate {
        value: 0.0,
        error: 0.0,
    }; N];
    for ((o, v), t) in out.iter_mut().zip(est.value).zip(orders) {
        check_real(v, "wigner_thermal")?;
        let nu = t as f64 / 2.0;
        // x from dy = x ds, x from (x² − y²)^{1/2}
        let pre = 2.0 * (nu * b).exp() / PI * x2;
        if !pre.is_finite() {
            return Err(Error::Overflow {
                what: "wigner_thermal",
                detail: format!("e^(nu b) with nu = {nu}, b = {b}"),
            });
        }
        *o = Estimate {
            value: pre * v.re,
            error: pre * est.error,
        };
    }
    Ok(out)
}

/// Thermalized Wigner function 𝒲_Ω^α(x, k).
pub fn wigner_thermal(x: f64, k: f64, state: &ThermalState) -> Result<f64> {
    wigner_thermal_estimate(x, k, state).map(|e| e.value)
}

pub fn wigner_thermal_estimate(x: f64, k: f64, state: &ThermalState) -> Result<Estimate<f64>> {
    let [w] = thermal_orders(x, k, state.b, [state.alpha.twice()])?;
    Ok(w)
}

/// 𝒲_Ω at orders (α−2, α, α+2).
pub fn wigner_thermal_triplet(x: f64, k: f64, state: &ThermalState) -> Result<[Estimate<f64>; 3]> {
    let t = state.alpha.twice();
    if state.alpha.twice() < 3 {
        return thermal_orders(x, k, state.b, [t - 4, t, t + 4]);
    }
    thermal_orders_with(x, k, state.b, [t - 4, t, t + 4], |z| {
        bessel_i_ratio_recurrence(state.alpha, z).map_or([f64::NAN; 3], |(a, b, c)| [a, b, c])
    })
}

/// 𝒵⁻¹ Σ_{n≤N} e^{−(2n+1)b} 𝒲_n: the thermal Wigner function rebuilt from
/// eigenstates.
pub fn wigner_thermal_boltzmann(x: f64, k: f64, state: &ThermalState, n_max: usize) -> Result<f64> {
    let z = partition_function(state.b)?;
    let mut acc = 0.0;
    for n in 0..=n_max {
        let weight = (-(2.0 * n as f64 + 1.0) * state.b).exp();
        acc += weight * wigner_stationary(n, state.alpha, x, k)?;
    }
    Ok(acc / z)
}

/// 𝒫 = tanh b.
pub fn purity_closed_form(b: f64) -> f64 {
    b.tanh()
}

/// 2π∫∫𝒲_Ω² reduced to a double integral over (s, t = x²):
///
/// 𝒫 = 4e^{2αb} ∫_{−1}^{1} ds (1−s²) ∫_0^∞ dt t e^{−2t a(s)} [e^{−tc}ℐ_α(tc)]²,
/// with a(s) = tanh(b/2) + s² coth(b/2) and c(s) = (1−s²)/sinh b.
pub fn purity_thermal_numeric(state: &ThermalState) -> Result<Estimate<f64>> {
    let (a_nu, b) = (state.alpha(), state.b);
    let twice = state.alpha.twice();
    let (th, cth, inv_sinh) = ((0.5 * b).tanh(), 1.0 / (0.5 * b).tanh(), 1.0 / b.sinh());
    let opts = FourierQuad::default();
    let inner_err = std::sync::Mutex::new(0.0f64);
    let outer = integrate_par(
        |s| {
            let one_m = 1.0 - s * s;
            let a = th + s * s * cth;
            let c = one_m * inv_sinh;
            // t^{1+2α}e^{−2at} has its peak at (1+2α)/(2a); go well past it
            let t_max = (2.0 * (1.0 + 2.0 * a_nu) + 80.0) / (2.0 * a);
            let e = integrate(
                |t| {
                    let i = bessel_i_scaled_unchecked(twice, t * c);
                    t * (-2.0 * t * a).exp() * i * i
                },
                0.0,
                t_max,
                &opts,
                "purity_thermal_numeric",
            )?;
            *inner_err.lock().unwrap() += e.error;
            Ok(one_m * e.value)
        },
        -1.0,
        1.0,
        &opts,
        "purity_thermal_numeric",
    )?;
    let pre = 4.0 * (2.0 * a_nu * b).exp();
    let inner = *inner_err.lock().unwrap();
    Ok(Estimate {
        value: pre * outer.value,
        error: pre * (outer.error + inner),
    })
}

/// Purity through the hypergeometric form of the s-integral:
///
/// (2^{1−2α}/√π)(Γ(α+3/2)/Γ(α+1)) e^{2αb} tanh²b sech^{2α}b
///   × ∫ ds (1−s²)^{2α+1}/(1+s²)^{2α+2} ₂F₁(α+½, α+3/2; 2α+1; ((1−s²)/(1+s²))² sech²b).
pub fn purity_hypergeometric_reduction_check(alpha: HalfIntOrder, b: f64) -> Result<f64> {
    let st = ThermalState::new(alpha, b)?;
    let a = st.alpha();
    let sech = 1.0 / b.cosh();
    let log_pre = (1.0 - 2.0 * a) * 2f64.ln() - 0.5 * PI.ln() + ln_gamma(a + 1.5)
        - ln_gamma(a + 1.0)
        + 2.0 * a * b
        + 2.0 * b.tanh().ln()
        + 2.0 * a * sech.ln();
    let err = RefCell::new(None);
    let e = integrate(
        |s| {
            let r = (1.0 - s * s) / (1.0 + s * s);
            let z = (r * sech).powi(2);
            match hyp2f1(a + 0.5, a + 1.5, 2.0 * a + 1.0, z) {
                Ok(f) => r.powf(2.0 * a + 1.0) / (1.0 + s * s) * f,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        -1.0,
        1.0,
        &FourierQuad::default(),
        "purity_hypergeometric_reduction_check",
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(log_pre.exp() * e?.value)
}

/// Relative size of the next neglected term that [`wigner_thermal_lowt`]
/// tolerates by default.
pub const LOWT_TAIL_TOL: f64 = 1e-2;

/// Low-temperature expansion of 𝒲_Ω from the ascending series of ℐ_α.
///
/// For half-integer α every power N = 1/2 + α + 2m is an integer, so
/// (1−σ²)^N expands into finitely many σ^{2j}, each produced by a ζ-derivative
/// of the Gaussian integral:
///
/// term_m = (e^b x²/(2 sinh b))^α x/√π (x²/(2 sinh b))^{2m}/(m! Γ(α+m+1))
///          e^{−ζx²} Σ_j binom(N, j) x^{−2j} ∂_ζ^j G(ζ),
/// G(ζ) = ζ^{−1/2} e^{−k²/ζ} 2 Re erf(ζ^{1/2}x + i ζ^{−1/2}k), ζ = coth b.
pub fn wigner_thermal_lowt(x: f64, k: f64, state: &ThermalState, m_max: usize) -> Result<f64> {
    wigner_thermal_lowt_with_tol(x, k, state, m_max, LOWT_TAIL_TOL)
}

pub fn wigner_thermal_lowt_with_tol(
    x: f64,
    k: f64,
    state: &ThermalState,
    m_max: usize,
    tail_tol: f64,
) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = (0..=m_max)
        .map(|m| lowt_term(x, k, state, m))
        .sum::<Result<f64>>()?;
    let next = lowt_term(x, k, state, m_max + 1)?;
    let ratio = next.abs() / sum.abs().max(f64::MIN_POSITIVE);
    if ratio > tail_tol {
        return Err(Error::Truncation {
            what: "wigner_thermal_lowt",
            ratio,
            tolerance: tail_tol,
        });
    }
    Ok(sum)
}

/// The m-th term of the low-temperature series.
pub fn lowt_term(x: f64, k: f64, state: &ThermalState, m: usize) -> Result<f64> {
    let (a, b) = (state.alpha(), state.b);
    let zeta0 = state.zeta();
    let n_pow = ((state.alpha.twice() + 1) / 2) as usize + 2 * m;
    let zeta = Jet::variable(zeta0, n_pow);
    let root = zeta.powf(0.5);
    let inv_root = zeta.powf(-0.5);
    let w = &root.scale(Complex64::new(x, 0.0)) + &inv_root.scale(Complex64::new(0.0, k));
    let gauss = zeta.powf(-1.0).scale(Complex64::new(-k * k, 0.0)).exp();
    let g = &(&inv_root * &gauss) * &w.erf()?;

    let mut inner = 0.0;
    let mut binom = 1.0;
    let mut fact = 1.0;
    let inv_x2 = 1.0 / (x * x);
    let mut xpow = 1.0;
    for (j, c) in g.coeffs().iter().enumerate() {
        if j > 0 {
            binom *= (n_pow + 1 - j) as f64 / j as f64;
            fact *= j as f64;
            xpow *= inv_x2;
        }
        // ∂_ζ^j G = j! · coefficient, and G carries the 2 Re(·)
        inner += binom * xpow * fact * 2.0 * c.re;
    }
    let mf = m as f64;
    let log_ratio = (x * x / (2.0 * b.sinh())).ln();
    let log_c = a * b + (a + 2.0 * mf) * log_ratio
        - ln_gamma(mf + 1.0)
        - ln_gamma(a + mf + 1.0)
        - zeta0 * x * x;
    Ok(log_c.exp() * x / PI.sqrt() * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn st(alpha: &str, b: f64) -> ThermalState {
        ThermalState::new(alpha.parse().unwrap(), b).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_relative_eq!(
            partition_function(1.0).unwrap(),
            0.42545906411966077,
            max_relative = 1e-14
        );
        let z = partition_function(10.0).unwrap();
        // 𝒵 e^{b} − 1 = e^{−2b}/(1 − e^{−2b}), a hair above e^{−2b}
        let dev = z / (-10f64).exp() - 1.0;
        let e2 = (-20f64).exp();
        assert_relative_eq!(dev, e2 / (1.0 - e2), max_relative = 1e-6);
        // the geometric tail is summed exactly by the bound
        let (b, n) = (0.5, 10);
        let gap = partition_function(b).unwrap() - partition_sum(b, n);
        assert_relative_eq!(gap, partition_tail_bound(b, n), max_relative = 1e-8);
        assert!(partition_function(1e-13).is_err());
    }

    #[test]
    fn cutoff_meets_its_bound() {
        for b in [0.3, 1.0, 4.0] {
            let n = boltzmann_cutoff(b);
            assert!((-2.0 * b * n as f64).exp() < 1e-10);
            assert!((-2.0 * b * (n - 1) as f64).exp() >= 1e-10);
        }
    }

    #[test]
    fn stationary_forms_agree() {
        let a: HalfIntOrder = "3/2".parse().unwrap();
        let d = wigner_stationary(2, a, 1.1, 0.7).unwrap();
        let j = wigner_stationary_jsum(2, a, 1.1, 0.7).unwrap();
        assert!((d - j).abs() < 1e-9, "{d} vs {j}");
    }

    #[test]
    fn ground_state_closed_form() {
        // n = 0: L_0 = 1, so 𝒲_0 is the thermal kernel's b → ∞ limit
        let a: HalfIntOrder = "3/2".parse().unwrap();
        let w0 = wigner_stationary(0, a, 1.2, 0.4).unwrap();
        let wt = wigner_thermal(1.2, 0.4, &st("3/2", 12.0)).unwrap();
        assert_relative_eq!(w0, wt, max_relative = 1e-9);
    }

    #[test]
    fn boltzmann_oracle() {
        let s = st("3/2", 1.0);
        let w = wigner_thermal(1.0, 0.5, &s).unwrap();
        let b = wigner_thermal_boltzmann(1.0, 0.5, &s, 25).unwrap();
        assert!((w - b).abs() < 1e-6, "{w} vs {b}");
    }

    #[test]
    fn low_temperature_limit() {
        let a: HalfIntOrder = "3/2".parse().unwrap();
        let w = wigner_thermal(1.3, 0.2, &st("3/2", 8.0)).unwrap();
        let w0 = wigner_stationary(0, a, 1.3, 0.2).unwrap();
        assert!((w - w0).abs() < 1e-6);
    }

    #[test]
    fn k_parity_and_support() {
        let s = st("5/2", 0.7);
        for (x, k) in [(0.4, 0.3), (1.5, 1.1), (2.7, 2.2)] {
            let p = wigner_thermal(x, k, &s).unwrap();
            let m = wigner_thermal(x, -k, &s).unwrap();
            assert!((p - m).abs() < 1e-10);
        }
        assert_eq!(wigner_thermal(0.0, 0.3, &s).unwrap(), 0.0);
        assert_eq!(wigner_thermal(-1.0, 0.3, &s).unwrap(), 0.0);
    }

    #[test]
    fn purity_closed() {
        assert_relative_eq!(purity_closed_form(1.0), 0.7615941559557649);
        assert_relative_eq!(purity_closed_form(2.0), 0.9640275800758169);
        assert!(purity_closed_form(1e-9) < 1e-8);
    }

    #[test]
    fn purity_numeric_matches_tanh() {
        let p = purity_thermal_numeric(&st("3/2", 1.0)).unwrap();
        assert!((p.value - 1f64.tanh()).abs() < 1e-6, "{}", p.value);
        assert!(p.error < 1e-6);
    }

    #[test]
    fn hypergeometric_reduction() {
        let a = purity_hypergeometric_reduction_check("3/2".parse().unwrap(), 1.0).unwrap();
        assert!((a - 1f64.tanh()).abs() < 1e-8, "{a}");
        let b = purity_hypergeometric_reduction_check("5/2".parse().unwrap(), 0.5).unwrap();
        assert!((b - 0.5f64.tanh()).abs() < 1e-8, "{b}");
    }

    #[test]
    fn kummer_integral() {
        // ∫(1−s²)^{2α+2k+1}/(1+s²)^{2α+2k+2} ds = √π Γ(1+α+k)/(2Γ(3/2+α+k)), α = 3/2, k = 1
        let p = 2.0 * 1.5 + 2.0 + 1.0;
        let e = integrate(
            |s| (1.0 - s * s).powf(p) / (1.0 + s * s).powf(p + 1.0),
            -1.0,
            1.0,
            &FourierQuad::default(),
            "t",
        )
        .unwrap();
        let want = (0.5 * PI.ln() + ln_gamma(3.5) - 2f64.ln() - ln_gamma(4.0)).exp();
        assert_relative_eq!(e.value, want, max_relative = 1e-12);
    }

    #[test]
    fn lowt_matches_quadrature() {
        let s = st("3/2", 4.0);
        let lt = wigner_thermal_lowt(1.0, 0.5, &s, 0).unwrap();
        let q = wigner_thermal(1.0, 0.5, &s).unwrap();
        assert!((lt - q).abs() < 1e-4, "{lt} vs {q}");
        let s = st("3/2", 2.0);
        let q = wigner_thermal(1.0, 0.5, &s).unwrap();
        let e0 = (wigner_thermal_lowt(1.0, 0.5, &s, 0).unwrap() - q).abs();
        let e1 = (wigner_thermal_lowt(1.0, 0.5, &s, 1).unwrap() - q).abs();
        assert!(e1 < e0, "{e1} !< {e0}");
    }

    #[test]
    fn lowt_first_term_matches_direct_integral() {
        // m = 0 term equals the quadrature of the leading Bessel-series term:
        // (2e^{αb}/π)(2 sinh b)^{−α}/Γ(α+1) ∫dy e^{2iky}(x²−y²)^{1/2+α}e^{−ζ(x²+y²)}
        let s = st("5/2", 1.5);
        let (x, k) = (1.2, 0.8);
        let a = s.alpha();
        let z = s.zeta();
        let e = FourierQuad::default()
            .integrate(
                |t| (1.0 - t * t).powi(3) * (-z * x * x * t * t).exp(),
                2.0 * k * x,
                "t",
            )
            .unwrap();
        let pre = 2.0 * (a * s.b).exp() / PI * (2.0 * s.b.sinh()).powf(-a)
            / ln_gamma(a + 1.0).exp()
            * x.powf(2.0 + 2.0 * a)
            * (-z * x * x).exp();
        let want = pre * e.value.re;
        assert_relative_eq!(lowt_term(x, k, &s, 0).unwrap(), want, max_relative = 1e-10);
    }

    #[test]
    fn lowt_reports_truncation() {
        let s = st("3/2", 0.2);
        let e = wigner_thermal_lowt(2.0, 0.1, &s, 0).unwrap_err();
        assert_eq!(e.code(), "truncation");
    }
}
