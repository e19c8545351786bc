//! The index of coincidence of the binomial distribution, exactly.
//!
//! For `n` trials and success probability `x`, the index of coincidence is
//!
//! ```text
//! F_n(x) = sum_{k=0}^{n} ( C(n,k) x^k (1-x)^{n-k} )^2,
//! ```
//!
//! an integer polynomial of degree exactly `2n`. This module expands `F_n`
//! by exact big-integer convolution, differentiates it formally, and
//! certifies the polynomial-level facts used downstream:
//!
//! * symmetry `F_n(1-x) = F_n(x)` (coefficient level),
//! * the Heun-type ODE residual `X X' F'' + [1+4(n-1)X] F' + 2n X' F`,
//!   which is identically zero (`X = x(1-x)`, `X' = 1-2x`),
//! * the log-convexity gap `F'' F - (F')^2 >= 0`.
//!
//! Everything here is exact rational arithmetic; there are no floating
//! point fast paths, so residual and sign checks are identities, not
//! tolerance questions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::rational::{rat_int, BigRational};
use crate::report::{PointOutcome, ReportBuilder, SamplerInfo, Slack};
use crate::CheckReport;

/// Default cap on the order `n`; guards memory and time on the expanded
/// polynomials (degree `2n`, coefficients of roughly `4n` bits).
pub const DEFAULT_MAX_ORDER: u32 = 200;

/// `F_n` together with its first two formal derivatives.
#[derive(Clone, Debug)]
pub struct IcPolynomial {
    n: u32,
    f: IntPolynomial,
    f1: IntPolynomial,
    f2: IntPolynomial,
}

/// Exact values of `F_n` and friends at one rational point.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalBundle {
    pub x: BigRational,
    /// `F_n(x)`; positive on `[0, 1]`.
    pub f: BigRational,
    /// `F_n'(x)`.
    pub f1: BigRational,
    /// `F_n''(x)`.
    pub f2: BigRational,
    /// `X = x(1-x)`.
    pub xx: BigRational,
    /// `X' = 1-2x`.
    pub xp: BigRational,
}

/// Expand `F_n` to the monomial basis; `1 <= n <= DEFAULT_MAX_ORDER`.
pub fn squared_binomial_polynomial(n: u32) -> Result<IntPolynomial> {
    squared_binomial_polynomial_capped(n, DEFAULT_MAX_ORDER)
}

/// Expand `F_n` with an explicit order cap.
pub fn squared_binomial_polynomial_capped(n: u32, cap: u32) -> Result<IntPolynomial> {
    if n == 0 || n > cap {
        return Err(Error::OrderOutOfRange {
            n: n.into(),
            cap: cap.into(),
        });
    }
    let n = n as usize;
    let row_n = binomial_row(n);
    let mut acc = vec![BigInt::zero(); 2 * n + 1];
    for (k, c) in row_n.iter().enumerate() {
        let weight = c * c;
        // (1-x)^(2(n-k)) = sum_j C(2(n-k), j) (-1)^j x^j, shifted by x^(2k).
        let m = 2 * (n - k);
        let mut term = BigInt::one();
        for j in 0..=m {
            if j > 0 {
                term = term * BigInt::from(m - j + 1) / BigInt::from(j);
            }
            if j % 2 == 0 {
                acc[2 * k + j] += &weight * &term;
            } else {
                acc[2 * k + j] -= &weight * &term;
            }
        }
    }
    Ok(IntPolynomial::from_coeffs(acc))
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    row.push(BigInt::one());
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

impl IcPolynomial {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_cap(n, DEFAULT_MAX_ORDER)
    }

    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        let f = squared_binomial_polynomial_capped(n, cap)?;
        let f1 = f.derivative();
        let f2 = f1.derivative();
        Ok(IcPolynomial { n, f, f1, f2 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn first_derivative(&self) -> &IntPolynomial {
        &self.f1
    }

    pub fn second_derivative(&self) -> &IntPolynomial {
        &self.f2
    }

    /// Evaluate `F_n`, `F_n'`, `F_n''` and the weights `X`, `X'` at
    /// `x in [0, 1]`, exactly.
    pub fn bundle(&self, x: &BigRational) -> Result<EvalBundle> {
        if x < &rat_int(0) || x > &rat_int(1) {
            return Err(Error::domain(x, "[0, 1]"));
        }
        let f = self.f.eval(x);
        debug_assert!(f.is_positive(), "F_n > 0 on [0, 1]");
        Ok(EvalBundle {
            xx: x * (rat_int(1) - x),
            xp: rat_int(1) - rat_int(2) * x,
            f,
            f1: self.f1.eval(x),
            f2: self.f2.eval(x),
            x: x.clone(),
        })
    }

    /// `X X' F_n''(x) + [1 + 4(n-1)X] F_n'(x) + 2n X' F_n(x)`, exactly.
    /// Identically zero: `F_n` solves this Heun-type equation.
    pub fn heun_residual(&self, x: &BigRational) -> Result<BigRational> {
        Ok(heun_combination(self.n, &self.bundle(x)?))
    }

    /// `F_n''(x) F_n(x) - (F_n'(x))^2`, exactly. Nonnegative on `[0, 1]`.
    pub fn logconvexity_gap(&self, x: &BigRational) -> Result<BigRational> {
        let b = self.bundle(x)?;
        Ok(&b.f2 * &b.f - &b.f1 * &b.f1)
    }
}

/// The Heun-type combination evaluated from an [`EvalBundle`].
pub fn heun_combination(n: u32, b: &EvalBundle) -> BigRational {
    let coeff_f1 = rat_int(1) + rat_int(4) * rat_int(i64::from(n) - 1) * &b.xx;
    &b.xx * &b.xp * &b.f2 + coeff_f1 * &b.f1 + rat_int(2 * i64::from(n)) * &b.xp * &b.f
}

/// Evaluate `F_n`, `F_n'`, `F_n''`, `X`, `X'` at a rational point.
pub fn eval_bundle(n: u32, x: &BigRational) -> Result<EvalBundle> {
    IcPolynomial::new(n)?.bundle(x)
}

/// Pointwise Heun residual; zero for every `n >= 1` and `x in [0, 1]`.
pub fn heun_residual(n: u32, x: &BigRational) -> Result<BigRational> {
    IcPolynomial::new(n)?.heun_residual(x)
}

/// Pointwise log-convexity gap `F'' F - (F')^2`; nonnegative on `[0, 1]`.
pub fn logconvexity_gap(n: u32, x: &BigRational) -> Result<BigRational> {
    IcPolynomial::new(n)?.logconvexity_gap(x)
}

/// `p(1-x) - p(x)`: the zero polynomial iff `p` is symmetric about `1/2`.
pub fn symmetry_defect(p: &IntPolynomial) -> IntPolynomial {
    p.compose_one_minus_x().sub(p)
}

/// The Heun combination as a polynomial in `x`; the zero polynomial for
/// every `n`, which certifies the ODE as an identity rather than only at
/// sample points.
pub fn heun_residual_polynomial(n: u32) -> Result<IntPolynomial> {
    let ic = IcPolynomial::new(n)?;
    let xx = IntPolynomial::from_i64(&[0, 1, -1]); // x(1-x)
    let xp = IntPolynomial::from_i64(&[1, -2]); // 1-2x
    let coeff_f1 = IntPolynomial::from_i64(&[1, 4 * (i64::from(n) - 1), -4 * (i64::from(n) - 1)]);
    let term1 = xx.mul(&xp).mul(ic.second_derivative());
    let term2 = coeff_f1.mul(ic.first_derivative());
    let term3 = xp.scale(&BigInt::from(2 * i64::from(n))).mul(ic.poly());
    Ok(term1.add(&term2).add(&term3))
}

/// The gap `F_n'' F_n - (F_n')^2` as a polynomial in `x`.
pub fn gap_polynomial(n: u32) -> Result<IntPolynomial> {
    let ic = IcPolynomial::new(n)?;
    Ok(ic
        .second_derivative()
        .mul(ic.poly())
        .sub(&ic.first_derivative().mul(ic.first_derivative())))
}

/// Coefficient-level symmetry check for one order `n`.
pub fn check_symmetry(n: u32) -> Result<CheckReport> {
    let mut builder = ReportBuilder::new(
        "symmetry",
        SamplerInfo::deterministic(format!("coefficients of F_{n}(1-x) - F_{n}(x)")),
    );
    symmetry_outcomes(n, &mut builder)?;
    Ok(builder.finish())
}

pub(crate) fn symmetry_outcomes(n: u32, builder: &mut ReportBuilder) -> Result<()> {
    let f = squared_binomial_polynomial(n)?;
    let defect = symmetry_defect(&f);
    for i in 0..=f.degree() {
        let c = defect.coeff(i);
        let at = rat_int(i as i64);
        let outcome = if c.is_zero() {
            PointOutcome::pass(n, &at, Slack::Exact(rat_int(0)))
        } else {
            PointOutcome::fail(n, &at, c.to_string(), "0", "nonzero coefficient", None)
        }
        .labeled(format!("coeff[{i}]"));
        builder.record(outcome);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn expands_f1_and_f2() {
        // F_1 = (1-x)^2 + x^2 = 1 - 2x + 2x^2
        let f1 = squared_binomial_polynomial(1).unwrap();
        assert_eq!(f1, IntPolynomial::from_i64(&[1, -2, 2]));

        // F_2(1/2) = (1 + 4 + 1)/16 = 3/8
        let f2 = squared_binomial_polynomial(2).unwrap();
        assert_eq!(f2.eval(&rat(1, 2)), rat(3, 8));
        assert_eq!(f2.degree(), 4);
    }

    #[test]
    fn rejects_degenerate_and_oversized_orders() {
        assert!(matches!(
            squared_binomial_polynomial(0),
            Err(Error::OrderOutOfRange { n: 0, .. })
        ));
        assert!(squared_binomial_polynomial(DEFAULT_MAX_ORDER + 1).is_err());
        assert!(squared_binomial_polynomial_capped(5, 4).is_err());
        assert!(squared_binomial_polynomial_capped(201, 250).is_ok());
    }

    #[test]
    fn value_at_zero_and_one_is_one() {
        for n in [1u32, 2, 3, 7, 20] {
            let f = squared_binomial_polynomial(n).unwrap();
            assert_eq!(f.coeff(0), BigInt::one(), "F_{n}(0) = 1");
            assert_eq!(f.coeff_sum(), BigInt::one(), "F_{n}(1) = 1");
            assert_eq!(f.degree(), 2 * n as usize);
        }
    }

    #[test]
    fn bundle_values_for_small_orders() {
        // n=1, x=1/4: f = 5/8, f' = -1, f'' = 4
        let b = eval_bundle(1, &rat(1, 4)).unwrap();
        assert_eq!(b.f, rat(5, 8));
        assert_eq!(b.f1, rat(-1, 1));
        assert_eq!(b.f2, rat(4, 1));
        assert_eq!(b.xx, rat(3, 16));
        assert_eq!(b.xp, rat(1, 2));

        // n=1, x=0: endpoint
        let b = eval_bundle(1, &rat_int(0)).unwrap();
        assert_eq!(b.f, rat_int(1));
        assert_eq!(b.f1, rat_int(-2));
        assert_eq!(b.f2, rat_int(4));

        // n=2, x=1/2
        let b = eval_bundle(2, &rat(1, 2)).unwrap();
        assert_eq!(b.f, rat(3, 8));

        // F_2'(0) = -2n = -4
        let b = eval_bundle(2, &rat_int(0)).unwrap();
        assert_eq!(b.f1, rat_int(-4));

        assert!(eval_bundle(1, &rat(3, 2)).is_err());
        assert!(eval_bundle(1, &rat(-1, 4)).is_err());
    }

    #[test]
    fn heun_residual_vanishes_pointwise() {
        assert_eq!(heun_residual(1, &rat(1, 4)).unwrap(), rat_int(0));
        assert_eq!(heun_residual(1, &rat_int(0)).unwrap(), rat_int(0));
        assert_eq!(heun_residual(10, &rat(3, 7)).unwrap(), rat_int(0));
        assert_eq!(heun_residual(37, &rat(123_456, 999_983)).unwrap(), rat_int(0));
    }

    #[test]
    fn heun_residual_is_the_zero_polynomial() {
        for n in [1u32, 2, 3, 5, 11, 40] {
            assert!(
                heun_residual_polynomial(n).unwrap().is_zero(),
                "residual polynomial nonzero for n={n}"
            );
        }
    }

    #[test]
    fn gap_for_n1_is_8x_1mx() {
        // F_1'' F_1 - (F_1')^2 = 8x(1-x)
        let gap = gap_polynomial(1).unwrap();
        assert_eq!(gap, IntPolynomial::from_i64(&[0, 8, -8]));
        assert_eq!(logconvexity_gap(1, &rat(1, 4)).unwrap(), rat(3, 2));
        assert_eq!(logconvexity_gap(1, &rat_int(0)).unwrap(), rat_int(0));
        assert!(logconvexity_gap(5, &rat(1, 3)).unwrap().is_positive());
    }

    #[test]
    fn gap_at_zero_is_2n_n_minus_1() {
        for n in [1u32, 2, 3, 10] {
            let gap = logconvexity_gap(n, &rat_int(0)).unwrap();
            let expected = rat_int(2 * i64::from(n) * (i64::from(n) - 1));
            assert_eq!(gap, expected);
        }
    }

    #[test]
    fn symmetry_passes_and_catches_mutations() {
        for n in [1u32, 7] {
            let report = check_symmetry(n).unwrap();
            assert!(report.passed, "F_{n} symmetry");
            assert_eq!(report.points_checked, 2 * u64::from(n) + 1);
        }

        // Negative control: F_1 + x is not symmetric.
        let mutated = squared_binomial_polynomial(1)
            .unwrap()
            .add(&IntPolynomial::from_i64(&[0, 1]));
        let defect = symmetry_defect(&mutated);
        assert!(!defect.is_zero());
        assert!(defect.coeffs().iter().any(|c| !c.is_zero()));
    }
}
