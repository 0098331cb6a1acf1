use crate::error::{Error, Result};

/// Generalized Laguerre polynomial L_n^α(x) via the three-term recurrence
///
/// (k + 1) L_{k+1} = (2k + 1 + α − x) L_k − (k + α) L_{k−1}.
pub fn assoc_laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::domain(
            "assoc_laguerre",
            format!("alpha = {alpha} must exceed -1"),
        ));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The explicit sum Σ_j (−x)^j/j! · binom(n+α, n−j). Kept as an independent
/// cross-check of the recurrence; it loses digits for large x.
pub fn assoc_laguerre_explicit(n: usize, alpha: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    // binom(n+α, n−j) = Γ(n+α+1)/(Γ(n−j+1) Γ(α+j+1)), built up term by term
    for j in 0..=n {
        let mut binom = 1.0;
        for i in 1..=(n - j) {
            binom *= (alpha + j as f64 + i as f64) / i as f64;
        }
        let mut pow = 1.0;
        for i in 1..=j {
            pow *= -x / i as f64;
        }
        sum += binom * pow;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_orders() {
        assert_eq!(assoc_laguerre(0, 1.5, 7.3).unwrap(), 1.0);
        assert_relative_eq!(assoc_laguerre(1, 0.5, 2.0).unwrap(), -0.5);
        // L_2^{3/2}(1) = ((3 + α − x) L_1 − (1 + α) L_0)/2 with L_1 = 1.5
        let want = ((3.0 + 1.5 - 1.0) * 1.5 - 2.5) / 2.0;
        assert_relative_eq!(assoc_laguerre(2, 1.5, 1.0).unwrap(), want, epsilon = 1e-15);
        assert_relative_eq!(want, 1.375);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(assoc_laguerre(3, -1.0, 0.5).is_err());
        assert!(assoc_laguerre(3, f64::NAN, 0.5).is_err());
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for n in 0..=12 {
            for alpha in [0.5, 1.5, 2.5] {
                for i in 0..=40 {
                    let x = 0.25 * i as f64;
                    let r = assoc_laguerre(n, alpha, x).unwrap();
                    let e = assoc_laguerre_explicit(n, alpha, x);
                    // the alternating sum can only be trusted to eps·Σ|terms| = eps·L_n^α(−x)
                    let conditioning = assoc_laguerre_explicit(n, alpha, -x);
                    assert!(
                        (r - e).abs() <= 1e-10 * r.abs() + 1e-15 * conditioning,
                        "n={n} a={alpha} x={x}: {r} vs {e}"
                    );
                }
            }
        }
    }
}
