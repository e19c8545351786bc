//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! The criteria pin every tolerance in code:
//! * exact checks (Heun residual, gap sign, symmetry, identities) admit
//!   no tolerance at all — they compare rationals;
//! * interval-certified inequalities start at 128 bits and escalate;
//! * the family scans use `eps_tol = 8 (trunc_tol + 2^-40)` and the
//!   Poisson/Bessel cross-check runs at `1e-12` relative.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use coinc_core::binomial_ic::{
    check_symmetry, gap_polynomial, IcPolynomial,
};
use coinc_core::convexity::{check_sandwich, check_sandwich_form, sandwich_form};
use coinc_core::entropy::{check_renyi_concavity, check_tsallis_logconcavity};
use coinc_core::family::{
    index_of_coincidence, poisson_ic_bessel, scan_logconvexity_numeric, FamilyConfig,
};
use coinc_core::grid::{
    default_half_open_grid, default_interior_grid, default_t_grid, default_unit_grid, GridSpec,
    DEFAULT_MAX_DENOMINATOR,
};
use coinc_core::legendre::{
    check_induction_step, check_log_derivative, check_ratio_bound, cross_identity_defect,
    log_derivative_via_legendre, ratio_bound, ratio_u,
};
use coinc_core::poly::IntPolynomial;
use coinc_core::rational::{binomial, rat, rat_int, rat_to_f64, BigRational};
use coinc_core::suite::{run_check_suite, SuiteConfig, DEFAULT_SEED};

/// Per-order sample: 257 uniform points on [0,1] plus 100 random
/// rationals drawn from an order-specific seed.
fn unit_sample(n: u32) -> Vec<BigRational> {
    GridSpec::Union(vec![
        GridSpec::Uniform {
            lo: rat_int(0),
            hi: rat_int(1),
            count: 257,
        },
        GridSpec::RandomRational {
            lo: rat_int(0),
            hi: rat_int(1),
            count: 100,
            seed: DEFAULT_SEED.wrapping_add(u64::from(n)),
            max_denominator: DEFAULT_MAX_DENOMINATOR,
        },
    ])
    .points()
}

#[test]
fn criterion_01_heun_identity() {
    let failures: Vec<(u32, BigRational)> = (1u32..=100)
        .into_par_iter()
        .flat_map_iter(|n| {
            let ic = IcPolynomial::new(n).expect("order in range");
            unit_sample(n)
                .into_iter()
                .filter(|x| !ic.heun_residual(x).unwrap().is_zero())
                .map(move |x| (n, x))
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(failures.is_empty(), "nonzero residuals at {failures:?}");
    println!(
        "[PASS] criterion 1: Heun residual exactly zero for n <= 100 on 357 points per n"
    );
}

#[test]
fn criterion_02_logconvexity_gap() {
    // Gap >= 0 exactly at every sampled point.
    let violations: Vec<(u32, BigRational)> = (1u32..=100)
        .into_par_iter()
        .flat_map_iter(|n| {
            let ic = IcPolynomial::new(n).expect("order in range");
            unit_sample(n)
                .into_iter()
                .filter(|x| ic.logconvexity_gap(x).unwrap() < rat_int(0))
                .map(move |x| (n, x))
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(violations.is_empty(), "negative gap at {violations:?}");

    // For n = 1 the gap is the polynomial 8x(1-x), coefficient for
    // coefficient.
    assert_eq!(
        gap_polynomial(1).unwrap(),
        IntPolynomial::from_i64(&[0, 8, -8])
    );
    println!("[PASS] criterion 2: gap >= 0 exactly for n <= 100; n=1 gap is 8x(1-x)");
}

#[test]
fn criterion_03_ratio_bound() {
    let report = check_ratio_bound(30, &default_t_grid(), 128).unwrap();
    assert!(report.passed, "witnesses: {:?}", report.witnesses);
    assert_eq!(report.points_checked, 30 * 101);

    // Endpoint identity: u_n(1) = n(n+1)/2 <= n^2 = B_n(1), equality only
    // at n = 1.
    for n in 1i64..=30 {
        let u = ratio_u(n as u32, &rat_int(1)).unwrap();
        assert_eq!(u, rat(n * (n + 1), 2));
        let bound = ratio_bound(n as u32, &rat_int(1), 64).unwrap();
        assert!(bound.is_point());
        assert_eq!(bound.lo(), &rat_int(n * n));
        assert_eq!(u == *bound.lo(), n == 1, "equality iff n = 1");
        assert!(u <= *bound.lo());
    }
    println!(
        "[PASS] criterion 3: 0 <= u_n <= bound certified for n <= 30 on {{1}} + 100 log-spaced t"
    );
}

#[test]
fn criterion_04_induction_step() {
    let grid = GridSpec::LogSpaced {
        lo: 1.0,
        hi: 100.0,
        count: 200,
    };
    let reports: Vec<_> = (1u32..=30)
        .into_par_iter()
        .map(|n| check_induction_step(n, &grid, 128).unwrap())
        .collect();
    for (i, report) in reports.iter().enumerate() {
        assert!(
            report.passed,
            "n = {}: witnesses {:?}",
            i + 1,
            report.witnesses
        );
        assert_eq!(report.points_checked, 200);
    }
    println!(
        "[PASS] criterion 4: induction chain certified for n <= 30 on 200 points t in (1, 100]"
    );
}

#[test]
fn criterion_05_log_derivative_identity() {
    let report = check_log_derivative(50, &default_half_open_grid(DEFAULT_SEED)).unwrap();
    assert!(report.passed, "witnesses: {:?}", report.witnesses);

    // The x = 0 limit convention.
    for n in 1u32..=50 {
        assert_eq!(
            log_derivative_via_legendre(n, &rat_int(0)).unwrap(),
            rat_int(-2 * i64::from(n))
        );
    }
    println!(
        "[PASS] criterion 5: Legendre-side log-derivative equals F'/F exactly for n <= 50 (with -2n at x = 0)"
    );
}

#[test]
fn criterion_06_sandwich_and_form_sign() {
    let grid = default_half_open_grid(DEFAULT_SEED);
    let sandwich = check_sandwich(30, &grid, 128).unwrap();
    assert!(sandwich.passed, "witnesses: {:?}", sandwich.witnesses);
    let form = check_sandwich_form(30, &grid).unwrap();
    assert!(form.passed, "witnesses: {:?}", form.witnesses);

    // Boundary equality at x = 0, exactly.
    for n in 1u32..=30 {
        assert_eq!(sandwich_form(n, &rat_int(0)).unwrap(), rat_int(0));
    }
    println!(
        "[PASS] criterion 6: root sandwich and quadratic-form sign certified for n <= 30 on [0, 1/2)"
    );
}

#[test]
fn criterion_07_symmetry() {
    let reports: Vec<_> = (1u32..=100)
        .into_par_iter()
        .map(|n| check_symmetry(n).unwrap())
        .collect();
    for report in &reports {
        assert!(report.passed);
    }
    let coefficients: u64 = reports.iter().map(|r| r.points_checked).sum();
    assert_eq!(coefficients, (1..=100u64).map(|n| 2 * n + 1).sum::<u64>());
    println!("[PASS] criterion 7: F_n(1-x) = F_n(x) at coefficient level for n <= 100");
}

#[test]
fn criterion_08_cross_identity_and_central_value() {
    // F_n(x) = (1-2x)^n P_n(t) exactly on the rational grid, n <= 50.
    let points: Vec<BigRational> = default_half_open_grid(DEFAULT_SEED)
        .points()
        .into_iter()
        .filter(|x| x < &rat(1, 2))
        .collect();
    let bad: Vec<(u32, BigRational)> = (1u32..=50)
        .into_par_iter()
        .flat_map_iter(|n| {
            let ic = IcPolynomial::new(n).expect("order in range");
            points
                .iter()
                .filter(|x| !cross_identity_defect(&ic, x).unwrap().is_zero())
                .map(|x| (n, x.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(bad.is_empty(), "cross identity fails at {bad:?}");

    // F_n(1/2) = C(2n, n)/4^n for n <= 100, with the right-hand side
    // recomputed by the brute-force sum of squared binomials.
    for n in 1u32..=100 {
        let value = IcPolynomial::new(n)
            .unwrap()
            .poly()
            .eval(&rat(1, 2));
        let brute: BigInt = (0..=u64::from(n))
            .map(|k| {
                let c = binomial(n.into(), k);
                &c * &c
            })
            .sum();
        let central = binomial(2 * u64::from(n), u64::from(n));
        assert_eq!(brute, central, "sum C(n,k)^2 = C(2n,n) at n = {n}");
        assert_eq!(
            value,
            BigRational::new(central, BigInt::from(4u32).pow(n)),
            "F_{n}(1/2)"
        );
    }
    println!(
        "[PASS] criterion 8: F_n = (1-2x)^n P_n(t) for n <= 50; F_n(1/2) = C(2n,n)/4^n for n <= 100"
    );
}

#[test]
fn criterion_09_entropy_corollaries() {
    let renyi = check_renyi_concavity(100, &default_unit_grid(DEFAULT_SEED)).unwrap();
    assert!(renyi.passed, "witnesses: {:?}", renyi.witnesses);
    let tsallis = check_tsallis_logconcavity(100, &default_interior_grid(DEFAULT_SEED)).unwrap();
    assert!(tsallis.passed, "witnesses: {:?}", tsallis.witnesses);
    println!(
        "[PASS] criterion 9: R_n'' <= 0 and (1-F)F'' + (F')^2 >= 0 exactly for n <= 100"
    );
}

#[test]
fn criterion_10_family_scans() {
    let grid = GridSpec::Uniform {
        lo: rat_int(0),
        hi: rat_int(5),
        count: 201,
    };
    for c in [0, 1] {
        for n in [0.5f64, 1.0, 2.0, 5.0] {
            let cfg = FamilyConfig::new(c, n).unwrap();
            let report = scan_logconvexity_numeric(&cfg, &grid).unwrap();
            assert!(
                report.passed,
                "c={c} n={n}: witnesses {:?}",
                report.witnesses
            );
        }
    }

    // Poisson direct sums agree with the Bessel oracle to 1e-12 relative
    // at every grid point.
    for n in [0.5f64, 1.0, 2.0, 5.0] {
        let cfg = FamilyConfig::new(0, n).unwrap();
        for x in grid.points() {
            let direct = index_of_coincidence(&cfg, &x).unwrap().value;
            let oracle = poisson_ic_bessel(n, rat_to_f64(&x), 64);
            let rel = ((direct - oracle) / oracle).abs();
            assert!(rel < 1e-12, "n={n} x={x}: relative gap {rel:e}");
        }
    }
    println!(
        "[PASS] criterion 10: numeric scans pass for c in {{0,1}}, n in {{1/2,1,2,5}}; Poisson matches Bessel oracle < 1e-12"
    );
}

#[test]
fn criterion_11_determinism() {
    let cfg = SuiteConfig {
        n_max: 4,
        ..SuiteConfig::default()
    };
    let a = coinc_core::report::suite_to_json(&run_check_suite(&cfg).unwrap());
    let b = coinc_core::report::suite_to_json(&run_check_suite(&cfg).unwrap());
    assert_eq!(a, b, "same-seed runs must serialize byte-identically");
    assert!(a.contains("\"seed\": 2014"));
    println!("[PASS] criterion 11: repeated runs with the same seed are byte-identical");
}
