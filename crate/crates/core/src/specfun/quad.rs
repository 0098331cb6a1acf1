use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre orders tried in turn by the adaptive drivers.
pub const LADDER: [usize; 17] = [
    16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1024, 1536, 2048, 3072, 4096,
];

static CACHE: [OnceLock<QuadratureRule>; LADDER.len()] = [const { OnceLock::new() }; LADDER.len()];

/// An n-point Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    /// Builds the rule by Newton iteration on P_n from Tricomi's initial guesses.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // node i counts down from +1; mirror for exact symmetry
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self {
            nodes,
            weights,
            order: n,
        }
    }

    /// Shared copy of a ladder rule; builds it on first use.
    pub fn cached(ladder_index: usize) -> &'static QuadratureRule {
        CACHE[ladder_index].get_or_init(|| Self::gauss_legendre(LADDER[ladder_index]))
    }

    /// ∫_a^b f on this rule.
    pub fn apply(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Settings for the adaptive finite-range drivers.
///
/// Successive ladder rules are compared and the pair is accepted when
/// |I_next − I_prev| ≤ rel_tol·L1 + abs_tol, where L1 = ∫|f| on the finer rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierQuad {
    pub min_order: usize,
    pub nodes_per_period: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for FourierQuad {
    fn default() -> Self {
        Self {
            min_order: 32,
            nodes_per_period: 8.0,
            rel_tol: 1e-12,
            abs_tol: 1e-15,
        }
    }
}

/// A quadrature value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

impl FourierQuad {
    fn start_index(&self, k_eff: f64) -> usize {
        let want =
            (self.min_order as f64).max(self.nodes_per_period * k_eff.abs() / std::f64::consts::PI);
        LADDER
            .iter()
            .position(|&n| n as f64 >= want)
            .unwrap_or(LADDER.len() - 1)
    }

    /// ∫_{−1}^{1} f_j(s) e^{i k s} ds for several real integrands sharing nodes.
    pub fn integrate_multi<const N: usize>(
        &self,
        f: impl Fn(f64) -> [f64; N],
        k_eff: f64,
        what: &'static str,
    ) -> Result<Estimate<[Complex64; N]>> {
        let eval = |idx: usize| {
            let rule = QuadratureRule::cached(idx);
            let mut acc = [Complex64::new(0.0, 0.0); N];
            let mut l1 = [0.0; N];
            for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
                let vals = f(s);
                let (sin, cos) = (k_eff * s).sin_cos();
                for j in 0..N {
                    acc[j] += Complex64::new(w * vals[j] * cos, w * vals[j] * sin);
                    l1[j] += w * vals[j].abs();
                }
            }
            (acc, l1)
        };
        let mut idx = self.start_index(k_eff);
        let (mut prev, _) = eval(idx);
        let mut worst = f64::INFINITY;
        while idx + 1 < LADDER.len() {
            idx += 1;
            let (cur, l1) = eval(idx);
            let mut ok = true;
            worst = 0.0;
            for j in 0..N {
                let diff = (cur[j] - prev[j]).norm();
                worst = worst.max(diff);
                if !diff.is_finite() || diff > self.rel_tol * l1[j] + self.abs_tol {
                    ok = false;
                }
            }
            if ok {
                return Ok(Estimate {
                    value: cur,
                    error: worst,
                });
            }
            prev = cur;
        }
        Err(Error::Accuracy {
            what,
            estimate: worst,
        })
    }

    /// ∫_{−1}^{1} f(s) e^{i k s} ds.
    pub fn integrate(
        &self,
        f: impl Fn(f64) -> f64,
        k_eff: f64,
        what: &'static str,
    ) -> Result<Estimate<Complex64>> {
        let e = self.integrate_multi(|s| [f(s)], k_eff, what)?;
        Ok(Estimate {
            value: e.value[0],
            error: e.error,
        })
    }
}

/// ∫_{−1}^{1} f(s) e^{i k_eff s} ds with the default settings.
pub fn finite_fourier_quad(f: impl Fn(f64) -> f64, k_eff: f64) -> Result<Complex64> {
    FourierQuad::default()
        .integrate(f, k_eff, "finite_fourier_quad")
        .map(|e| e.value)
}

/// Multi-integrand form of [`finite_fourier_quad`].
pub fn finite_fourier_quad_multi<const N: usize>(
    f: impl Fn(f64) -> [f64; N],
    k_eff: f64,
) -> Result<[Complex64; N]> {
    FourierQuad::default()
        .integrate_multi(f, k_eff, "finite_fourier_quad")
        .map(|e| e.value)
}

/// Real ∫_a^b f by the same ladder comparison.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: &FourierQuad,
    what: &'static str,
) -> Result<Estimate<f64>> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let e = opts.integrate(|s| f(mid + half * s), 0.0, what)?;
    Ok(Estimate {
        value: e.value.re * half,
        error: e.error * half.abs(),
    })
}

/// Real ∫_a^b f for a fallible integrand that is expensive enough to be worth
/// spreading over threads. Node values are computed in parallel and summed in
/// node order, so the result does not depend on the thread count.
pub fn integrate_par(
    f: impl Fn(f64) -> Result<f64> + Sync,
    a: f64,
    b: f64,
    opts: &FourierQuad,
    what: &'static str,
) -> Result<Estimate<f64>> {
    use rayon::prelude::*;

    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let eval = |idx: usize| -> Result<(f64, f64)> {
        let rule = QuadratureRule::cached(idx);
        let vals: Vec<f64> = rule
            .nodes
            .par_iter()
            .map(|&s| f(mid + half * s))
            .collect::<Result<_>>()?;
        let mut acc = 0.0;
        let mut l1 = 0.0;
        for (v, w) in vals.iter().zip(&rule.weights) {
            acc += w * v;
            l1 += w * v.abs();
        }
        Ok((acc * half, l1 * half.abs()))
    };
    let mut idx = opts.start_index(0.0);
    let (mut prev, _) = eval(idx)?;
    let mut diff = f64::INFINITY;
    while idx + 1 < LADDER.len() {
        idx += 1;
        let (cur, l1) = eval(idx)?;
        diff = (cur - prev).abs();
        if diff <= opts.rel_tol * l1 + opts.abs_tol {
            return Ok(Estimate {
                value: cur,
                error: diff,
            });
        }
        prev = cur;
    }
    Err(Error::Accuracy {
        what,
        estimate: diff,
    })
}
