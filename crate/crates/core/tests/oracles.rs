//! Reference values computed with mpmath at 40 significant digits.

#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use num_complex::Complex64;
use sophase::specfun::{assoc_laguerre, bessel_i, erf_complex, hyp2f1};
use sophase::HalfIntOrder;

fn order(nu: f64) -> HalfIntOrder {
    HalfIntOrder::from_f64(nu).unwrap()
}

#[test]
fn scaled_bessel_half_integer_orders() {
    let cases = [
        (0.5, 0.3, 0.32863009259125284773),
        (1.5, 2.0, 0.14879751539472359193),
        (-1.5, 0.7, -0.48991602451617160864),
        (5.5, 10.0, 0.02712998350236360287),
        (11.5, 40.0, 0.01200296805829471295),
        (-0.5, 25.0, 0.079788456080286535588),
    ];
    for (nu, z, expected) in cases {
        let got = bessel_i(order(nu), z, true).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-13);
    }
}

#[test]
fn unscaled_bessel_matches_scaled_times_exponential() {
    let s = bessel_i(order(1.5), 2.0, true).unwrap();
    let u = bessel_i(order(1.5), 2.0, false).unwrap();
    assert_relative_eq!(u, s * 2f64.exp(), max_relative = 1e-15);
    assert!(bessel_i(order(0.5), 800.0, false).is_err());
    assert!(bessel_i(order(0.5), -1.0, true).is_err());
}

#[test]
fn gauss_hypergeometric() {
    let cases = [
        ((0.5, 1.5, 2.5, 0.3), 1.1080625510569319884),
        ((1.0, 1.0, 2.0, -0.9), 0.71317098463599419094),
        ((0.25, 0.75, 1.5, 0.99), 1.3483997249264841453),
        ((1.5, -2.0, 3.0, 0.6), 0.5125),
        ((0.5, 0.5, 3.0, 1.0), 1.1317684842090334988),
    ];
    for ((a, b, c, z), expected) in cases {
        assert_relative_eq!(hyp2f1(a, b, c, z).unwrap(), expected, max_relative = 1e-11);
    }
}

#[test]
fn associated_laguerre() {
    let cases = [
        ((3, 1.5, 2.0), -1.5208333333333333333),
        ((10, 5.5, 7.3), -17.656603574505556028),
        ((25, 0.5, 30.0), 221479.69719263986011),
        ((40, 11.5, 3.0), 1910552.8139900923896),
    ];
    for ((n, a, x), expected) in cases {
        assert_relative_eq!(
            assoc_laguerre(n, a, x).unwrap(),
            expected,
            max_relative = 1e-12
        );
    }
}

#[test]
fn complex_error_function() {
    let cases = [
        ((0.3, 0.2), (0.34123748147213858588, 0.20852883788276887638)),
        (
            (2.5, -1.0),
            (0.99938268513779984535, 0.00084694454339379261683),
        ),
        ((-0.7, 3.0), (683.92016210261354899, -668.13829007621098938)),
        (
            (4.0, 4.0),
            (0.97854923307608192587, 0.097339690630831865347),
        ),
    ];
    for ((re, im), (ere, eim)) in cases {
        let got = erf_complex(Complex64::new(re, im)).unwrap();
        let expected = Complex64::new(ere, eim);
        assert!(
            (got - expected).norm() <= 1e-12 * expected.norm(),
            "erf({re}+{im}i) = {got}"
        );
    }
}
