//! Property tests for the exact identities.
//!
//! The oracles here are deliberately independent of the library paths
//! they check: the squared-binomial sum is evaluated term by term in
//! rational arithmetic (no polynomial expansion), and the Legendre ratio
//! is recomputed from the classical recursion as a derivative quotient.

use num_bigint::BigInt;
use proptest::prelude::*;

use coinc_core::binomial_ic::{eval_bundle, heun_residual, logconvexity_gap, IcPolynomial};
use coinc_core::legendre::{
    legendre_derivative, legendre_eval, log_derivative_via_legendre, ratio_u, x_to_t,
};
use coinc_core::rational::{binomial, rat, rat_int, BigRational};

/// Independent oracle: the defining sum of `F_n(x)`, term by term.
fn squared_binomial_sum(n: u32, x: &BigRational) -> BigRational {
    let one_minus_x = rat_int(1) - x;
    (0..=n)
        .map(|k| {
            let c = BigRational::from_integer(binomial(n.into(), k.into()));
            let term = c * x.pow(k as i32) * one_minus_x.pow((n - k) as i32);
            &term * &term
        })
        .sum()
}

/// Rationals in `[0, 1]` with denominators up to 10^6.
fn unit_rational() -> impl Strategy<Value = BigRational> {
    (1u64..=1_000_000, 0.0..=1.0f64).prop_map(|(den, frac)| {
        let num = (frac * den as f64).round() as u64;
        BigRational::new(BigInt::from(num.min(den)), BigInt::from(den))
    })
}

/// Rationals in `[1, 1001]`.
fn t_rational() -> impl Strategy<Value = BigRational> {
    (0i64..=999, 0u64..=1_000_000, 1u64..=1_000_000).prop_map(|(int, num, den)| {
        rat_int(1) + rat_int(int) + BigRational::new(BigInt::from(num.min(den)), BigInt::from(den))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_matches_defining_sum(n in 1u32..=12, x in unit_rational()) {
        let expanded = IcPolynomial::new(n).unwrap().poly().eval(&x);
        prop_assert_eq!(expanded, squared_binomial_sum(n, &x));
    }

    #[test]
    fn heun_residual_is_zero(n in 1u32..=40, x in unit_rational()) {
        prop_assert_eq!(heun_residual(n, &x).unwrap(), rat_int(0));
    }

    #[test]
    fn gap_is_nonnegative_and_symmetric(n in 1u32..=40, x in unit_rational()) {
        let gap = logconvexity_gap(n, &x).unwrap();
        prop_assert!(gap >= rat_int(0));
        let mirrored = logconvexity_gap(n, &(rat_int(1) - &x)).unwrap();
        prop_assert_eq!(gap, mirrored);
    }

    #[test]
    fn bundle_weights_are_consistent(n in 1u32..=20, x in unit_rational()) {
        let b = eval_bundle(n, &x).unwrap();
        prop_assert_eq!(&b.xx, &(&b.x * (rat_int(1) - &b.x)));
        prop_assert_eq!(&b.xp, &(rat_int(1) - rat_int(2) * &b.x));
        prop_assert!(b.f > rat_int(0));
    }

    #[test]
    fn ratio_recurrence_equals_derivative_quotient(n in 1u32..=50, t in t_rational()) {
        let primary = ratio_u(n, &t).unwrap();
        let oracle = legendre_derivative(n, &t) / legendre_eval(n, &t);
        prop_assert_eq!(&primary, &oracle);
        prop_assert!(primary >= rat_int(0));
    }

    #[test]
    fn substitution_closed_forms_hold(x in unit_rational()) {
        prop_assume!(x < rat(1, 2));
        let tp = x_to_t(&x).unwrap();
        prop_assert!(tp.t >= rat_int(1));
        prop_assert_eq!(&tp.t * &tp.t - rat_int(1), &tp.sqrt_t2m1 * &tp.sqrt_t2m1);
        prop_assert_eq!(&tp.s, &(rat_int(1) - rat_int(2) * &x));
    }

    #[test]
    fn log_derivative_times_f_equals_f_prime(n in 1u32..=30, x in unit_rational()) {
        prop_assume!(x < rat(1, 2));
        let b = eval_bundle(n, &x).unwrap();
        let ld = log_derivative_via_legendre(n, &x).unwrap();
        prop_assert_eq!(ld * &b.f, b.f1);
    }
}

#[test]
fn central_value_is_central_binomial_over_4n() {
    // F_n(1/2) = C(2n, n) / 4^n, against the defining sum for small n and
    // the exact binomial for larger ones.
    for n in 1u32..=60 {
        let expected = BigRational::new(
            binomial(2 * u64::from(n), u64::from(n)),
            BigInt::from(4u32).pow(n),
        );
        let via_poly = IcPolynomial::new(n).unwrap().poly().eval(&rat(1, 2));
        assert_eq!(via_poly, expected, "n = {n}");
        if n <= 12 {
            assert_eq!(squared_binomial_sum(n, &rat(1, 2)), expected);
        }
    }
}

#[test]
fn endpoint_values_are_one() {
    for n in [1u32, 5, 40] {
        assert_eq!(
            squared_binomial_sum(n, &rat_int(0)),
            rat_int(1),
            "oracle at x=0"
        );
        let ic = IcPolynomial::new(n).unwrap();
        assert_eq!(ic.poly().eval(&rat_int(0)), rat_int(1));
        assert_eq!(ic.poly().eval(&rat_int(1)), rat_int(1));
    }
}
