use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::erf_complex;
use crate::error::Result;

/// Truncated Taylor series a₀ + a₁ε + … + a_n εⁿ with complex coefficients.
///
/// Arithmetic on jets propagates all derivatives at once, so the j-th
/// derivative of a composite function is j!·a_j. Only the operations needed by
/// the low-temperature thermal expansion are provided.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<Complex64>,
}

impl Jet {
    /// A constant carried to `order`.
    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
        c[0] = value;
        Self { c }
    }

    /// The independent variable expanded about `at`.
    pub fn variable(at: f64, order: usize) -> Self {
        let mut j = Self::constant(Complex64::new(at, 0.0), order);
        if order > 0 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// j-th derivative at the expansion point.
    pub fn derivative(&self, j: usize) -> Complex64 {
        let mut fact = 1.0;
        for i in 2..=j {
            fact *= i as f64;
        }
        self.c[j] * fact
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            c: self.c.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
        e[0] = self.c[0].exp();
        for m in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += self.c[k] * e[m - k] * k as f64;
            }
            e[m] = acc / m as f64;
        }
        Self { c: e }
    }

    /// Real power a^p; the expansion point must be nonzero.
    pub fn powf(&self, p: f64) -> Self {
        let n = self.order();
        let a0 = self.c[0];
        let mut y = vec![Complex64::new(0.0, 0.0); n + 1];
        y[0] = a0.powf(p);
        for m in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += self.c[k] * y[m - k] * (k as f64 * (p + 1.0) - m as f64);
            }
            y[m] = acc / (a0 * m as f64);
        }
        Self { c: y }
    }

    /// erf of a jet, from erf′(w) = (2/√π) e^{−w²}.
    #[allow(clippy::needless_range_loop)]
    pub fn erf(&self) -> Result<Self> {
        let n = self.order();
        let h = (-(self * self))
            .exp()
            .scale(Complex64::new(std::f64::consts::FRAC_2_SQRT_PI, 0.0));
        let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
        g[0] = erf_complex(self.c[0])?;
        for m in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += self.c[k] * h.c[m - k] * k as f64;
            }
            g[m] = acc / m as f64;
        }
        Ok(Self { c: g })
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, ci) in c.iter_mut().enumerate() {
            for k in 0..=i {
                *ci += self.c[k] * rhs.c[i - k];
            }
        }
        Jet { c }
    }
}
