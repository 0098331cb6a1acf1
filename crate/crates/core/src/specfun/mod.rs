//! Special functions and quadrature primitives.
//!
//! Nothing in here knows about oscillators; the physics modules call into these
//! routines with already-dimensionless arguments.

mod bessel;
mod erf;
mod hyp;
mod jet;
mod laguerre;
mod quad;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_i, bessel_i_ratio_recurrence, bessel_i_scaled_unchecked};
pub use erf::erf_complex;
pub use hyp::hyp2f1;
pub use jet::Jet;
pub use laguerre::{assoc_laguerre, assoc_laguerre_explicit};
pub use quad::{
    finite_fourier_quad, finite_fourier_quad_multi, integrate, integrate_par, Estimate,
    FourierQuad, QuadratureRule, LADDER,
};

/// A half-integer order ν, stored as the odd integer 2ν.
///
/// Orders are parsed from either fraction (`"3/2"`) or decimal (`"1.5"`)
/// notation and compared exactly, which sidesteps any float-equality traps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct HalfIntOrder {
    twice_value: i32,
}

impl HalfIntOrder {
    pub const HALF: HalfIntOrder = HalfIntOrder { twice_value: 1 };

    pub fn from_twice(twice_value: i32) -> Result<Self> {
        if twice_value % 2 == 0 {
            return Err(Error::domain(
                "half-integer order",
                format!("2ν = {twice_value} must be odd"),
            ));
        }
        Ok(Self { twice_value })
    }

    /// Accepts a float only if it is exactly a half-integer.
    pub fn from_f64(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > i32::MAX as f64 {
            return Err(Error::domain(
                "half-integer order",
                format!("{value} is not a half-integer"),
            ));
        }
        Self::from_twice(twice as i32)
    }

    pub fn twice(self) -> i32 {
        self.twice_value
    }

    pub fn value(self) -> f64 {
        self.twice_value as f64 / 2.0
    }

    /// The order shifted by an integer amount, e.g. `shifted(-2)` for α − 2.
    pub fn shifted(self, by: i32) -> Self {
        Self {
            twice_value: self.twice_value + 2 * by,
        }
    }
}

impl TryFrom<i32> for HalfIntOrder {
    type Error = Error;
    fn try_from(t: i32) -> Result<Self> {
        Self::from_twice(t)
    }
}

impl From<HalfIntOrder> for i32 {
    fn from(o: HalfIntOrder) -> i32 {
        o.twice_value
    }
}

impl fmt::Display for HalfIntOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice_value)
    }
}

impl FromStr for HalfIntOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::domain("half-integer order", format!("cannot parse {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            let den: i32 = den.trim().parse().map_err(|_| bad())?;
            match den {
                2 => Self::from_twice(num),
                -2 => Self::from_twice(-num),
                _ => Err(Error::domain(
                    "half-integer order",
                    format!("{s:?} must have denominator 2"),
                )),
            }
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            Self::from_f64(v)
        }
    }
}

/// ln Γ(ν + 1) for half-integer ν ≥ −1/2, built from Γ(1/2) = √π and the
/// step Γ(z + 1) = z Γ(z). Exact up to rounding of the log-sum.
pub(crate) fn ln_gamma_half_plus_one(order: HalfIntOrder) -> f64 {
    debug_assert!(order.twice() >= -1);
    let mut acc = 0.5 * std::f64::consts::PI.ln();
    // Γ(ν + 1) = Γ(1/2) · Π_{j=0}^{ν-1/2} (j + 1/2)
    let steps = (order.twice() + 1) / 2;
    for j in 0..steps {
        acc += (j as f64 + 0.5).ln();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal() {
        assert_eq!("3/2".parse::<HalfIntOrder>().unwrap().twice(), 3);
        assert_eq!("1.5".parse::<HalfIntOrder>().unwrap().twice(), 3);
        assert_eq!("-1/2".parse::<HalfIntOrder>().unwrap().twice(), -1);
        assert_eq!(" 11/2 ".parse::<HalfIntOrder>().unwrap().value(), 5.5);
        assert!("1".parse::<HalfIntOrder>().is_err());
        assert!("3/4".parse::<HalfIntOrder>().is_err());
        assert!("abc".parse::<HalfIntOrder>().is_err());
        assert!(HalfIntOrder::from_f64(1.25).is_err());
    }

    #[test]
    fn display_round_trips() {
        let o = HalfIntOrder::from_twice(7).unwrap();
        assert_eq!(o.to_string().parse::<HalfIntOrder>().unwrap(), o);
        assert_eq!(o.shifted(-2).twice(), 3);
    }

    #[test]
    fn ln_gamma_half_matches_statrs() {
        for t in [-1, 1, 3, 5, 11, 21] {
            let o = HalfIntOrder::from_twice(t).unwrap();
            let want = statrs::function::gamma::ln_gamma(o.value() + 1.0);
            assert!((ln_gamma_half_plus_one(o) - want).abs() < 1e-12);
        }
    }
}
