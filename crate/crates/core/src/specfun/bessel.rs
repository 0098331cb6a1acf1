use std::f64::consts::PI;

use super::{ln_gamma_half_plus_one, HalfIntOrder};
use crate::error::{Error, Result};

/// Modified Bessel function of the first kind ℐ_ν(z) for half-integer ν.
///
/// With `scaled` set the result is e^{−z} ℐ_ν(z), which stays finite for any
/// z ≥ 0; this is the form every caller inside the crate uses.
pub fn bessel_i(order: HalfIntOrder, z: f64, scaled: bool) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::domain(
            "bessel_i",
            format!("z = {z} must be nonnegative"),
        ));
    }
    let s = bessel_i_scaled_unchecked(order.twice(), z);
    if scaled {
        return Ok(s);
    }
    let v = s * z.exp();
    if z > 0.0 && s > 0.0 && !v.is_finite() {
        return Err(Error::Overflow {
            what: "bessel_i",
            detail: format!("unscaled I_{order}({z}) exceeds f64 range; use the scaled form"),
        });
    }
    Ok(v)
}

/// Returns e^{−z}(ℐ_{α−2}(z), ℐ_α(z), ℐ_{α+2}(z)).
///
/// These are the three orders that appear once the identity
/// ℐ_α(z)/z = (ℐ_{α−1}(z) − ℐ_{α+1}(z))/(2α) is applied twice to ℐ_α(z)/z².
pub fn bessel_i_ratio_recurrence(order: HalfIntOrder, z: f64) -> Result<(f64, f64, f64)> {
    let a = order.value();
    if a * (a - 1.0) * (a + 1.0) == 0.0 {
        return Err(Error::domain(
            "bessel_i_ratio_recurrence",
            "alpha(alpha-1)(alpha+1) vanishes",
        ));
    }
    if !(z > 0.0) {
        return Err(Error::domain(
            "bessel_i_ratio_recurrence",
            format!("z = {z} must be positive"),
        ));
    }
    let t = order.twice();
    Ok((
        bessel_i_scaled_unchecked(t - 4, z),
        bessel_i_scaled_unchecked(t, z),
        bessel_i_scaled_unchecked(t + 4, z),
    ))
}

/// e^{−z} ℐ_{t/2}(z) for odd `t` and z ≥ 0, without argument checks.
pub fn bessel_i_scaled_unchecked(twice: i32, z: f64) -> f64 {
    debug_assert!(twice % 2 != 0);
    if twice > 0 {
        scaled_positive(twice, z)
    } else {
        scaled_negative(twice, z)
    }
}

fn scaled_positive(twice: i32, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let nu = twice as f64 / 2.0;
    if z <= 20.0 + nu * nu {
        series(twice, z)
    } else {
        upward(twice, z)
    }
}

/// Ascending series (z/2)^ν Σ (z²/4)^k / (k! Γ(ν+k+1)), all terms positive.
fn series(twice: i32, z: f64) -> f64 {
    let nu = twice as f64 / 2.0;
    let order = HalfIntOrder { twice_value: twice };
    let log_pre = nu * (0.5 * z).ln() - z - ln_gamma_half_plus_one(order);
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (nu + k));
        sum += term;
        if term < 1e-17 * sum || k > 10_000.0 {
            break;
        }
    }
    (log_pre + sum.ln()).exp()
}

/// Upward recurrence ℐ_{ν+1} = ℐ_{ν−1} − (2ν/z) ℐ_ν from the closed forms of
/// orders ±1/2. Only used where z exceeds ν², so the recurrence is benign.
fn upward(twice: i32, z: f64) -> f64 {
    let c = (2.0 * PI * z).powf(-0.5);
    let e = (-2.0 * z).exp();
    let mut lo = c * (1.0 + e); // order -1/2
    let mut hi = c * (1.0 - e); // order 1/2
    let mut nu = 0.5;
    let mut t = 1;
    while t < twice {
        let next = lo - (2.0 * nu / z) * hi;
        lo = hi;
        hi = next;
        nu += 1.0;
        t += 2;
    }
    hi
}

/// Negative half-integer orders through ℐ_{−ν} = ℐ_ν + (2/π) sin(νπ) K_ν with
/// the finite closed form of K_{n+1/2}.
fn scaled_negative(twice: i32, z: f64) -> f64 {
    if z == 0.0 {
        return f64::INFINITY;
    }
    let n = (-twice - 1) / 2;
    let pos = scaled_positive(-twice, z);
    // Σ_{k=0}^{n} (n+k)!/(k!(n−k)!) (2z)^{−k}
    let mut coeff = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        let (nf, kf) = (n as f64, k as f64);
        coeff *= (nf + kf) * (nf - kf + 1.0) / kf / (2.0 * z);
        sum += coeff;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    pos + sign * (2.0 / (PI * z)).sqrt() * (-2.0 * z).exp() * sum
}
