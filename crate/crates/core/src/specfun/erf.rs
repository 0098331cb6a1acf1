use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Largest exponent we allow in e^{−w²} before declaring overflow.
const MAX_EXPONENT: f64 = 700.0;

/// The error function on the complex plane.
///
/// Maclaurin series near the origin and in the strip |Re w| ≤ 1 (where the
/// series suffers no cancellation beyond a factor e^{2 Re(w)²}), and Laplace's
/// continued fraction for erfc elsewhere.
pub fn erf_complex(w: Complex64) -> Result<Complex64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Overflow {
            what: "erf_complex",
            detail: format!("non-finite argument {w}"),
        });
    }
    // |erf(w)| grows like e^{Im(w)² − Re(w)²}
    let growth = w.im * w.im - w.re * w.re;
    if growth > MAX_EXPONENT {
        return Err(Error::Overflow {
            what: "erf_complex",
            detail: format!("Im(w)^2 - Re(w)^2 = {growth:.1} exceeds {MAX_EXPONENT}"),
        });
    }
    if w.norm() <= 2.5 || w.re.abs() <= 1.0 {
        return Ok(maclaurin(w));
    }
    if w.re > 0.0 {
        Ok(Complex64::new(1.0, 0.0) - erfc_cf(w))
    } else {
        Ok(erfc_cf(-w) - Complex64::new(1.0, 0.0))
    }
}

fn maclaurin(w: Complex64) -> Complex64 {
    // erf(w) = 2/√π Σ (−1)^n w^{2n+1} / (n! (2n+1))
    let w2 = w * w;
    let mut power = w; // (−1)^n w^{2n+1}/n!
    let mut sum = w;
    let mut n = 0.0;
    loop {
        n += 1.0;
        power = -power * w2 / n;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() || n > 5000.0 {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// erfc(w) = e^{−w²}/√π · 1/(w + (1/2)/(w + 1/(w + (3/2)/(w + …)))) for Re w > 0,
/// evaluated with the modified Lentz algorithm.
fn erfc_cf(w: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = w;
    let mut c = w;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..5000 {
        let a = n as f64 / 2.0;
        d = w + a * d;
        if d.norm() < 1e-300 {
            d = tiny;
        }
        c = w + a / c;
        if c.norm() < 1e-300 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-w * w).exp() / (f * std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_axis() {
        assert_eq!(erf_complex(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_relative_eq!(
            erf_complex(c(1.0, 0.0)).unwrap().re,
            0.8427007929497149,
            max_relative = 1e-15
        );
        // arbitrary-precision reference values
        let cases = [
            (-4.0, -0.9999999845827421),
            (-1.3, -0.9340079449406524),
            (-0.2, -0.22270258921047847),
            (0.05, 0.05637197779701663),
            (0.7, 0.6778011938374184),
            (2.2, 0.9981371537020182),
            (3.1, 0.9999883513426328),
            (5.5, 0.9999999999999927),
        ];
        for (x, want) in cases {
            let got = erf_complex(c(x, 0.0)).unwrap();
            assert_relative_eq!(got.re, want, max_relative = 1e-14);
            assert!(got.im.abs() < 1e-15);
        }
    }

    #[test]
    fn imaginary_axis_stays_imaginary() {
        let v = erf_complex(c(0.0, 1.0)).unwrap();
        assert_eq!(v.re, 0.0);
        // erf(i) = i·erfi(1)
        assert_relative_eq!(v.im, 1.6504257587975428, max_relative = 1e-14);
    }

    #[test]
    fn off_axis_reference_values() {
        // arbitrary-precision reference values
        let cases = [
            (c(1.5, 0.7), c(1.0404046154368714, 0.033625498125576172)),
            (c(3.0, -2.0), c(0.99896327885681727, 1.1546724379290603e-5)),
            (c(-2.7, 1.1), c(-0.99957495725418274, 4.0839891176692724e-6)),
            (c(0.4, 4.0), c(53372.634932550264, -1097000.4943488474)),
        ];
        for (w, want) in cases {
            let got = erf_complex(w).unwrap();
            assert!(
                (got - want).norm() <= 4e-14 * want.norm(),
                "{w}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn odd_and_conjugate_symmetric() {
        for w in [c(0.3, 0.4), c(2.9, 1.7), c(1.2, -3.3)] {
            let a = erf_complex(w).unwrap();
            assert!((erf_complex(-w).unwrap() + a).norm() < 1e-14 * a.norm());
            assert!((erf_complex(w.conj()).unwrap() - a.conj()).norm() < 1e-14 * a.norm());
        }
    }

    #[test]
    fn overflow_is_reported() {
        let e = erf_complex(c(0.0, 30.0)).unwrap_err();
        assert_eq!(e.code(), "overflow");
    }
}
