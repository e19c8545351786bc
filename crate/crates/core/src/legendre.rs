//! Legendre polynomials, the logarithmic-derivative ratio `u_n = P_n'/P_n`,
//! its closed-form bound, and the substitution connecting the binomial
//! index of coincidence to `P_n`.
//!
//! On `t >= 1` the ratio satisfies the recurrence
//!
//! ```text
//! u_1(t) = 1/t,
//! u_{n+1}(t) = (n+1) (n+1 + t u_n(t)) / ((n+1) t + (t^2-1) u_n(t)),
//! ```
//!
//! and is bounded by
//!
//! ```text
//! 0 <= u_n(t) <= B_n(t) = 2n^2 / ( sqrt(4n^2(t^2-1) + s^2) + s ),
//! s = t - sqrt(t^2-1).
//! ```
//!
//! The recurrence is the primary computation path; the quotient `P_n'/P_n`
//! computed from the classical three-term recursion serves as an
//! independent oracle in the tests. `B_n` contains square roots that are
//! irrational at general rational `t`, so bound comparisons go through
//! outward-rounded interval enclosures ([`crate::interval`]) rather than
//! floats.
//!
//! For `x in [0, 1/2)` the substitution `t = (2x^2-2x+1)/(1-2x)` has the
//! exact algebraic simplifications `sqrt(t^2-1) = 2X/X'` and
//! `s = X'` (with `X = x(1-x)`, `X' = 1-2x`), which keep the whole
//! log-derivative identity inside rational arithmetic.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::binomial_ic::IcPolynomial;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::interval::{rat_le_interval, sqrt_interval, sqrt_of_interval, Certainty, PrecisionLadder, RatInterval};
use crate::rational::{rat, rat_int, BigRational};
use crate::report::{PointOutcome, ReportBuilder, Slack};
use crate::CheckReport;

/// Exact `P_n(t)` by the three-term recursion
/// `(k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}`.
pub fn legendre_eval(n: u32, t: &BigRational) -> BigRational {
    legendre_pair(n, t).1
}

/// `(P_{n-1}(t), P_n(t))`; `P_{-1}` is reported as zero for `n = 0`.
fn legendre_pair(n: u32, t: &BigRational) -> (BigRational, BigRational) {
    if n == 0 {
        return (BigRational::zero(), rat_int(1));
    }
    let mut prev = rat_int(1);
    let mut cur = t.clone();
    for k in 1..n {
        let k = i64::from(k);
        let next = (rat_int(2 * k + 1) * t * &cur - rat_int(k) * &prev) / rat_int(k + 1);
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Exact `P_n'(t)` from `(t^2-1) P_n' = n (t P_n - P_{n-1})`, with the
/// endpoint values `P_n'(±1) = (±1)^(n+1) n(n+1)/2`.
pub fn legendre_derivative(n: u32, t: &BigRational) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    let n_i = i64::from(n);
    if t == &rat_int(1) {
        return rat(n_i * (n_i + 1), 2);
    }
    if t == &rat_int(-1) {
        let magnitude = rat(n_i * (n_i + 1), 2);
        return if n % 2 == 0 { -magnitude } else { magnitude };
    }
    let (p_prev, p_n) = legendre_pair(n, t);
    rat_int(n_i) * (t * &p_n - p_prev) / (t * t - rat_int(1))
}

/// The ratio `u_n(t) = P_n'(t)/P_n(t)` by the proof recurrence; exact for
/// rational `t >= 1`.
pub fn ratio_u(n: u32, t: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::OrderOutOfRange { n: 0, cap: u32::MAX.into() });
    }
    if t < &rat_int(1) {
        return Err(Error::domain(t, "t >= 1"));
    }
    let t2m1 = t * t - rat_int(1);
    let mut u = rat_int(1) / t;
    for m in 1..n {
        let m1 = rat_int(i64::from(m) + 1);
        let numer = &m1 * (&m1 + t * &u);
        let denom = &m1 * t + &t2m1 * &u;
        debug_assert!(denom.is_positive(), "recurrence denominator positive for t >= 1");
        u = numer / denom;
    }
    Ok(u)
}

/// The substitution point `t = (2x^2-2x+1)/(1-2x)` with its exact
/// square-root data.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoint {
    /// `t >= 1`.
    pub t: BigRational,
    /// `s = t - sqrt(t^2-1) = 1-2x`, exactly.
    pub s: BigRational,
    /// `sqrt(t^2-1) = 2X/X'`, exactly.
    pub sqrt_t2m1: BigRational,
}

/// Map `x in [0, 1/2)` to its `t`-point. Rejects `x = 1/2` (pole of the
/// substitution) and `x > 1/2` (use the symmetry `F_n(1-x) = F_n(x)`).
pub fn x_to_t(x: &BigRational) -> Result<TPoint> {
    if x < &rat_int(0) || x >= &rat(1, 2) {
        return Err(Error::domain(x, "[0, 1/2)"));
    }
    let xx = x * (rat_int(1) - x);
    let xp = rat_int(1) - rat_int(2) * x;
    let t = (rat_int(1) - rat_int(2) * &xx) / &xp;
    let sqrt_t2m1 = rat_int(2) * &xx / &xp;
    // The simplification t^2 - 1 = (2X/X')^2 is exact; keep it checked.
    debug_assert_eq!(&t * &t - rat_int(1), &sqrt_t2m1 * &sqrt_t2m1);
    Ok(TPoint {
        t,
        s: xp,
        sqrt_t2m1,
    })
}

/// The log-derivative `F_n'(x)/F_n(x)` computed on the Legendre side:
/// `(2 sqrt(t^2-1) / s) (u_n(t) - n / sqrt(t^2-1))`, exact for rational
/// `x in (0, 1/2)`; at `x = 0` the limit value `-2n` is used.
pub fn log_derivative_via_legendre(n: u32, x: &BigRational) -> Result<BigRational> {
    let tp = x_to_t(x)?;
    if tp.sqrt_t2m1.is_zero() {
        // x = 0: sqrt(t^2-1) = 0 and the product collapses to its limit.
        return Ok(rat_int(-2 * i64::from(n)));
    }
    let u = ratio_u(n, &tp.t)?;
    let scale = rat_int(2) * &tp.sqrt_t2m1 / &tp.s;
    Ok(scale * (u - rat_int(i64::from(n)) / &tp.sqrt_t2m1))
}

/// `F_n(x) - (1-2x)^n P_n(t)`: zero whenever the cross identity holds.
pub fn cross_identity_defect(ic: &IcPolynomial, x: &BigRational) -> Result<BigRational> {
    let tp = x_to_t(x)?;
    let p = legendre_eval(ic.n(), &tp.t);
    let scale = tp.s.pow(ic.n() as i32);
    Ok(ic.poly().eval(x) - scale * p)
}

/// Single-point check of the cross identity `F_n(x) = (1-2x)^n P_n(t)`.
pub fn legendre_cross_identity(n: u32, x: &BigRational) -> Result<CheckReport> {
    let ic = IcPolynomial::new(n)?;
    let mut builder = ReportBuilder::new(
        "legendre_cross_identity",
        crate::report::SamplerInfo::deterministic(format!("single point x={x}")),
    );
    let defect = cross_identity_defect(&ic, x)?;
    builder.record(if defect.is_zero() {
        PointOutcome::pass(n, x, Slack::Exact(rat_int(0)))
    } else {
        PointOutcome::fail(n, x, defect.to_string(), "0", "cross identity", None)
    });
    Ok(builder.finish())
}

/// Enclose the ratio bound
/// `B_n(t) = 2n^2 / ( sqrt(4n^2(t^2-1) + s^2) + s )` at absolute
/// precision `2^-bits`.
pub fn ratio_bound(n: u32, t: &BigRational, bits: u32) -> Result<RatInterval> {
    if t < &rat_int(1) {
        return Err(Error::domain(t, "t >= 1"));
    }
    let t2m1 = t * t - rat_int(1);
    let root = sqrt_interval(&t2m1, bits)?;
    let s = RatInterval::point(t.clone()).sub(&root);
    let n_sq = rat_int(i64::from(n) * i64::from(n));
    let radicand = s.square().add_rat(&(rat_int(4) * &n_sq * &t2m1));
    let d = sqrt_of_interval(&radicand, bits)?;
    RatInterval::point(rat_int(2) * n_sq).div(&d.add(&s))
}

/// Enclose the middle expression of the bound's induction step:
/// `(n+1) [ (n+1)(D+s) + 2n^2 t ] / [ (n+1) t (D+s) + 2n^2 (t^2-1) ]`
/// with `D = sqrt(4n^2(t^2-1) + s^2)`.
pub fn induction_middle(n: u32, t: &BigRational, bits: u32) -> Result<RatInterval> {
    if t < &rat_int(1) {
        return Err(Error::domain(t, "t >= 1"));
    }
    let t2m1 = t * t - rat_int(1);
    let root = sqrt_interval(&t2m1, bits)?;
    let s = RatInterval::point(t.clone()).sub(&root);
    let n_sq = rat_int(i64::from(n) * i64::from(n));
    let radicand = s.square().add_rat(&(rat_int(4) * &n_sq * &t2m1));
    let d_plus_s = sqrt_of_interval(&radicand, bits)?.add(&s);
    let n1 = rat_int(i64::from(n) + 1);
    let two_nsq = rat_int(2) * &n_sq;
    let numer = d_plus_s.mul_rat(&n1).add_rat(&(&two_nsq * t));
    let denom = d_plus_s.mul_rat(&(&n1 * t)).add_rat(&(&two_nsq * &t2m1));
    numer.div(&denom).map(|q| q.mul_rat(&n1))
}

/// Grid check of the log-derivative identity for all `n <= n_max` on
/// `x in [0, 1/2)` (other grid points are skipped): the Legendre-side
/// value equals the exact quotient `F_n'(x)/F_n(x)`, and the underlying
/// cross identity `F_n(x) = (1-2x)^n P_n(t)` holds. Both are exact
/// rational comparisons.
pub fn check_log_derivative(n_max: u32, x_grid: &GridSpec) -> Result<CheckReport> {
    let mut builder = ReportBuilder::new("log_derivative_identity", x_grid.sampler_info());
    let points: Vec<BigRational> = x_grid
        .points()
        .into_iter()
        .filter(|x| x >= &rat_int(0) && x < &rat(1, 2))
        .collect();
    let rows: Vec<Vec<PointOutcome>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<PointOutcome>> {
            let ic = IcPolynomial::new(n)?;
            let mut out = Vec::with_capacity(points.len());
            for x in &points {
                let defect = cross_identity_defect(&ic, x)?;
                if !defect.is_zero() {
                    out.push(PointOutcome::fail(
                        n,
                        x,
                        defect.to_string(),
                        "0",
                        "cross identity F = (1-2x)^n P_n(t)",
                        None,
                    ));
                    continue;
                }
                let legendre_side = log_derivative_via_legendre(n, x)?;
                let b = ic.bundle(x)?;
                let exact_side = &b.f1 / &b.f;
                out.push(if legendre_side == exact_side {
                    PointOutcome::pass(n, x, Slack::Exact(rat_int(0)))
                } else {
                    PointOutcome::fail(
                        n,
                        x,
                        legendre_side.to_string(),
                        exact_side.to_string(),
                        "log-derivative identity",
                        Some(Slack::Exact(-(legendre_side - &exact_side).abs())),
                    )
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        builder.record_all(row);
    }
    Ok(builder.finish())
}

/// Grid check of `0 <= u_n(t) <= B_n(t)` for all `n <= n_max`.
///
/// The left inequality is exact; the right is certified by interval
/// comparison with precision escalation starting at `bits`.
pub fn check_ratio_bound(n_max: u32, t_grid: &GridSpec, bits: u32) -> Result<CheckReport> {
    let mut builder = ReportBuilder::new("legendre_ratio_bound", t_grid.sampler_info());
    let points = t_grid.points();
    let ladder = PrecisionLadder::new(bits);
    let rows: Vec<Vec<PointOutcome>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<PointOutcome>> {
            let mut out = Vec::with_capacity(points.len());
            for t in &points {
                let u = ratio_u(n, t)?;
                if u.is_negative() {
                    out.push(PointOutcome::fail(
                        n,
                        t,
                        u.to_string(),
                        "0",
                        "left inequality u_n >= 0",
                        Some(Slack::Exact(u.clone())),
                    ));
                    continue;
                }
                out.push(certify_le_with_bound(n, t, &u, n, &ladder)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        builder.record_all(row);
    }
    Ok(builder.finish())
}

/// Certify `value <= B_bound_index(t)`, escalating precision as needed.
fn certify_le_with_bound(
    n: u32,
    t: &BigRational,
    value: &BigRational,
    bound_index: u32,
    ladder: &PrecisionLadder,
) -> Result<PointOutcome> {
    let mut last_bits = ladder.start_bits;
    for bits in ladder.steps() {
        last_bits = bits;
        let bound = ratio_bound(bound_index, t, bits)?;
        match rat_le_interval(value, &bound) {
            Certainty::Holds => {
                let slack = bound.lo() - value;
                return Ok(PointOutcome::pass(n, t, Slack::Exact(slack)));
            }
            Certainty::Fails => {
                let slack = bound.hi() - value;
                return Ok(PointOutcome::fail(
                    n,
                    t,
                    value.to_string(),
                    format!("{bound}"),
                    "right inequality u_n <= B_n",
                    Some(Slack::Exact(slack)),
                ));
            }
            Certainty::Undecided => continue,
        }
    }
    Ok(PointOutcome::fail(
        n,
        t,
        value.to_string(),
        "B_n(t)",
        format!("undecided at {last_bits} bits"),
        None,
    ))
}

/// Check the induction step of the bound proof for one `n`: the middle
/// expression is at most `B_{n+1}(t)` at every grid point (`t = 1` is an
/// exact endpoint evaluation because every radicand is a perfect square
/// there).
pub fn check_induction_step(n: u32, t_grid: &GridSpec, bits: u32) -> Result<CheckReport> {
    let mut builder = ReportBuilder::new("bound_induction_step", t_grid.sampler_info());
    induction_outcomes(n, &t_grid.points(), bits, &mut builder)?;
    Ok(builder.finish())
}

pub(crate) fn induction_outcomes(
    n: u32,
    points: &[BigRational],
    bits: u32,
    builder: &mut ReportBuilder,
) -> Result<()> {
    let ladder = PrecisionLadder::new(bits);
    for t in points {
        let mut decided = false;
        let mut last_bits = ladder.start_bits;
        for bits in ladder.steps() {
            last_bits = bits;
            let middle = induction_middle(n, t, bits)?;
            let bound = ratio_bound(n + 1, t, bits)?;
            match middle.le(&bound) {
                Certainty::Holds => {
                    let slack = bound.lo() - middle.hi();
                    builder.record(PointOutcome::pass(n, t, Slack::Exact(slack)));
                    decided = true;
                }
                Certainty::Fails => {
                    builder.record(PointOutcome::fail(
                        n,
                        t,
                        format!("{middle}"),
                        format!("{bound}"),
                        "induction chain middle <= B_{n+1}",
                        Some(Slack::Exact(bound.hi() - middle.lo())),
                    ));
                    decided = true;
                }
                Certainty::Undecided => continue,
            }
            break;
        }
        if !decided {
            builder.record(PointOutcome::fail(
                n,
                t,
                "middle expression",
                "B_{n+1}(t)",
                format!("undecided at {last_bits} bits"),
                None,
            ));
        }
    }
    Ok(())
}
