use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;
const REL_TOL: f64 = 1e-12;

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real arguments, |z| ≤ 1.
///
/// Negative z is first mapped into (0, 1/2] with the Pfaff transformation, and
/// z = 1 uses Gauss's summation theorem when it converges.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::domain(
            "hyp2f1",
            format!("c = {c} is a nonpositive integer"),
        ));
    }
    if !(z.abs() <= 1.0) {
        return Err(Error::domain(
            "hyp2f1",
            format!("|z| = {} exceeds 1", z.abs()),
        ));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == 1.0 {
        let s = c - a - b;
        if s <= 0.0 {
            return Err(Error::domain(
                "hyp2f1",
                format!("series diverges at z = 1 since c - a - b = {s} <= 0"),
            ));
        }
        return Ok(gamma(c) * gamma(s) / (gamma(c - a) * gamma(c - b)));
    }
    if z < 0.0 {
        let zz = z / (z - 1.0);
        return Ok((1.0 - z).powf(-a) * series(a, c - b, c, zz)?);
    }
    series(a, b, c, z)
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // once the term ratio has settled below one, the tail is roughly geometric
        let r = ratio.abs();
        if r < 1.0 {
            let tail = term.abs() * r / (1.0 - r);
            if tail <= REL_TOL * sum.abs() && term.abs() <= REL_TOL * sum.abs() {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence {
        what: "hyp2f1",
        terms: MAX_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trivial_and_elementary() {
        assert_eq!(hyp2f1(0.3, 1.7, 2.2, 0.0).unwrap(), 1.0);
        // ₂F₁(1, 1; 2; z) = −ln(1 − z)/z
        for z in [-1.0, -0.6, 0.2, 0.9] {
            let want = -(1.0f64 - z).ln() / z;
            assert_relative_eq!(
                hyp2f1(1.0, 1.0, 2.0, z).unwrap(),
                want,
                max_relative = 1e-11
            );
        }
        // terminating series: ₂F₁(−2, b; c; z) is a quadratic
        let (b, c, z) = (1.5, 2.5, 0.4);
        let want = 1.0 - 2.0 * b / c * z + b * (b + 1.0) / (c * (c + 1.0)) * z * z;
        assert_relative_eq!(hyp2f1(-2.0, b, c, z).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn kummer_closed_form_at_minus_one() {
        // ₂F₁(1/2, 2+2k+2α; 5/2+2k+2α; −1) at α = 3/2, k = 0
        let (a, k) = (1.5, 0.0);
        let got = hyp2f1(0.5, 2.0 + 2.0 * k + 2.0 * a, 2.5 + 2.0 * k + 2.0 * a, -1.0).unwrap();
        let want = gamma(1.0 + a + k) * gamma(2.5 + 2.0 * k + 2.0 * a)
            / (2.0 * gamma(1.5 + a + k) * gamma(2.0 + 2.0 * k + 2.0 * a));
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }

    #[test]
    fn quadratic_transformation_identity() {
        // ₂F₁(α+1/2, α+1; 2α+1; 4y(1−y)) = (1−y)^{−2α} (1−2y)^{−1}
        let (a, y) = (1.5, 0.2);
        let got = hyp2f1(a + 0.5, a + 1.0, 2.0 * a + 1.0, 4.0 * y * (1.0 - y)).unwrap();
        let want = (1.0 - y).powf(-2.0 * a) / (1.0 - 2.0 * y);
        assert_relative_eq!(got, want, max_relative = 1e-11);
    }

    #[test]
    fn gauss_summation_at_one() {
        let got = hyp2f1(0.5, 0.25, 2.0, 1.0).unwrap();
        let want = gamma(2.0) * gamma(1.25) / (gamma(1.5) * gamma(1.75));
        assert_relative_eq!(got, want, max_relative = 1e-13);
        assert!(hyp2f1(1.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn domain_errors() {
        assert_eq!(hyp2f1(1.0, 1.0, -2.0, 0.5).unwrap_err().code(), "domain");
        assert_eq!(hyp2f1(1.0, 1.0, 2.0, 1.5).unwrap_err().code(), "domain");
    }

    #[test]
    fn slow_series_reports_non_convergence() {
        // c − a − b = −0.9 near z → 1: terms decay like n^{-0.1} z^n
        let e = hyp2f1(1.0, 0.9, 1.0, 1.0 - 1e-9).unwrap_err();
        assert_eq!(e.code(), "non_convergence");
    }
}
