use num_bigint::BigInt;
use radmax::quadrature::{integrate, integrate_to_infinity, QuadratureSpec};
use radmax::rational::{ceil_div, from_f64_dyadic, parse_q, parse_q_or_inf, q, qi};
use radmax::regression::linear_fit;
use radmax::Error;

#[test]
fn rational_literals() {
    assert_eq!(parse_q("3/2").unwrap(), q(3, 2));
    assert_eq!(parse_q("-0.125").unwrap(), q(-1, 8));
    assert_eq!(parse_q("2^-4").unwrap(), q(1, 16));
    assert_eq!(parse_q("1e-3").unwrap(), q(1, 1000));
    assert_eq!(parse_q("5").unwrap(), qi(5));
    assert!(parse_q("1/0").is_err());
    assert!(parse_q("abc").is_err());
    assert_eq!(parse_q_or_inf("inf").unwrap(), None);
}

#[test]
fn dyadic_rounding() {
    assert_eq!(from_f64_dyadic(0.5, 10), q(1, 2));
    assert_eq!(ceil_div(&q(3, 4), &q(1, 4)), BigInt::from(3));
}

#[test]
fn least_squares() {
    let f = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-12);
    assert!((f.intercept - 1.0).abs() < 1e-12);
    assert!(f.residual < 1e-12);
    assert!(linear_fit(&[1.0], &[1.0]).is_err());
}

#[test]
fn quadrature_rules() {
    let spec = QuadratureSpec::default();
    assert!((integrate(|x| x * x, 0.0, 3.0, &spec).unwrap().value - 9.0).abs() < 1e-13);
    assert!((integrate(|x| x.sqrt(), 0.0, 1.0, &spec).unwrap().value - 2.0 / 3.0).abs() < 1e-10);
    assert!((integrate_to_infinity(|x| (-x).exp(), 0.0, &spec).unwrap().value - 1.0).abs() < 1e-10);
}

#[test]
fn quadrature_failures() {
    let spec = QuadratureSpec { max_refinement: 2, ..QuadratureSpec::default() };
    assert!(matches!(integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, &spec), Err(Error::Precision(_))));
    assert!(matches!(integrate(|_| f64::NAN, 0.0, 1.0, &QuadratureSpec::default()), Err(Error::Singularity(_))));
}
