//! Order-2 Renyi and Tsallis entropies of the binomial distribution.
//!
//! With `F_n` the index of coincidence, the order-2 entropies are
//! `R_n(x) = -log F_n(x)` and `T_n(x) = 1 - F_n(x)`. The corollary checks
//! run without forming any logarithm:
//!
//! * `R_n'' = -(F_n'' F_n - (F_n')^2) / F_n^2`, so `R_n` is concave
//!   exactly where the log-convexity gap is nonnegative;
//! * `T_n` is log-concave iff `(1 - F_n) F_n'' + (F_n')^2 >= 0`, a
//!   polynomial inequality that extends continuously to the closed
//!   interval even though `log T_n` itself blows up at the endpoints.
//!
//! `R_n` uses the natural logarithm; concavity is base-invariant.

use num_traits::Signed;
use rayon::prelude::*;

use crate::binomial_ic::IcPolynomial;
use crate::error::Result;
use crate::grid::GridSpec;
use crate::interval::{ln_interval, RatInterval};
use crate::rational::{rat_int, rat_to_f64, BigRational};
use crate::report::{PointOutcome, ReportBuilder, Slack};
use crate::CheckReport;

/// Entropies of order 2 at one parameter value.
#[derive(Clone, Debug)]
pub struct EntropyPoint {
    pub x: BigRational,
    /// `R_n(x) = -ln F_n(x)` as a certified enclosure.
    pub renyi2: RatInterval,
    /// `T_n(x) = 1 - F_n(x)`, exact.
    pub tsallis2: BigRational,
}

/// Compute both entropies; `renyi2` is enclosed at `2^-bits` precision.
pub fn entropies(n: u32, x: &BigRational, bits: u32) -> Result<EntropyPoint> {
    let ic = IcPolynomial::new(n)?;
    entropies_of(&ic, x, bits)
}

pub(crate) fn entropies_of(ic: &IcPolynomial, x: &BigRational, bits: u32) -> Result<EntropyPoint> {
    let f = ic.bundle(x)?.f;
    let renyi2 = ln_interval(&f, bits)?.neg();
    Ok(EntropyPoint {
        x: x.clone(),
        renyi2,
        tsallis2: rat_int(1) - f,
    })
}

/// Concavity of `R_n` on `[0, 1]` for all `n <= n_max`: the sign check
/// `-R_n'' = gap / F_n^2 >= 0` runs exactly; uniform grid runs also get a
/// discrete float confirmation that sampled `R_n` values are concave.
pub fn check_renyi_concavity(n_max: u32, x_grid: &GridSpec) -> Result<CheckReport> {
    let mut builder = ReportBuilder::new("renyi_concavity", x_grid.sampler_info());
    let points = x_grid.points();
    let uniform_runs = x_grid.uniform_runs();
    let rows: Vec<Vec<PointOutcome>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<PointOutcome>> {
            let ic = IcPolynomial::new(n)?;
            let mut out = Vec::with_capacity(points.len());
            for x in &points {
                let b = ic.bundle(x)?;
                // -R'' = (F'' F - (F')^2) / F^2
                let neg_r2 = (&b.f2 * &b.f - &b.f1 * &b.f1) / (&b.f * &b.f);
                out.push(if neg_r2.is_negative() {
                    PointOutcome::fail(
                        n,
                        x,
                        (-&neg_r2).to_string(),
                        "0",
                        "R'' must be <= 0",
                        Some(Slack::Exact(neg_r2.clone())),
                    )
                } else {
                    PointOutcome::pass(n, x, Slack::Exact(neg_r2))
                });
            }
            for run in &uniform_runs {
                out.extend(discrete_concavity_confirm(&ic, run));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        builder.record_all(row);
    }
    Ok(builder.finish())
}

fn discrete_concavity_confirm(ic: &IcPolynomial, run: &[BigRational]) -> Vec<PointOutcome> {
    const EPS_FLOAT: f64 = 1e-12;
    let n = ic.n();
    let values: Vec<f64> = run
        .iter()
        .map(|x| -rat_to_f64(&ic.poly().eval(x)).ln())
        .collect();
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let d2 = values[i + 1] - 2.0 * values[i] + values[i - 1];
        let slack = EPS_FLOAT - d2;
        out.push(if slack < 0.0 {
            PointOutcome::fail(
                n,
                &run[i],
                d2.to_string(),
                EPS_FLOAT.to_string(),
                "discrete concavity confirmation",
                Some(Slack::Approx(slack)),
            )
        } else {
            PointOutcome::pass(n, &run[i], Slack::Approx(slack))
        });
    }
    out
}

/// Log-concavity of `T_n` on the open interval `(0, 1)` for all
/// `n <= n_max`, via the exact polynomial inequality
/// `(1 - F_n) F_n'' + (F_n')^2 >= 0`. Grid endpoints are skipped: `T_n`
/// vanishes there and the log form is undefined, while the polynomial
/// inequality extends continuously.
pub fn check_tsallis_logconcavity(n_max: u32, x_grid: &GridSpec) -> Result<CheckReport> {
    let mut builder = ReportBuilder::new("tsallis_logconcavity", x_grid.sampler_info());
    let points: Vec<BigRational> = x_grid
        .points()
        .into_iter()
        .filter(|x| x > &rat_int(0) && x < &rat_int(1))
        .collect();
    let rows: Vec<Vec<PointOutcome>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<PointOutcome>> {
            let ic = IcPolynomial::new(n)?;
            let mut out = Vec::with_capacity(points.len());
            for x in &points {
                let b = ic.bundle(x)?;
                // (1-F) F'' + (F')^2; equals -(T T'' - (T')^2).
                let value = (rat_int(1) - &b.f) * &b.f2 + &b.f1 * &b.f1;
                out.push(if value.is_negative() {
                    PointOutcome::fail(
                        n,
                        x,
                        value.to_string(),
                        "0",
                        "T log-concavity form must be >= 0",
                        Some(Slack::Exact(value.clone())),
                    )
                } else {
                    PointOutcome::pass(n, x, Slack::Exact(value))
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{default_interior_grid, default_unit_grid};
    use crate::rational::rat;

    #[test]
    fn entropy_values_small_orders() {
        // n=1, x=0: F=1, both entropies zero.
        let e = entropies(1, &rat_int(0), 64).unwrap();
        assert_eq!(e.tsallis2, rat_int(0));
        assert!(e.renyi2.contains_rat(&rat_int(0)));

        // n=1, x=1/2: T = 1/2; n=2, x=1/2: T = 5/8.
        assert_eq!(entropies(1, &rat(1, 2), 64).unwrap().tsallis2, rat(1, 2));
        assert_eq!(entropies(2, &rat(1, 2), 64).unwrap().tsallis2, rat(5, 8));

        // R_1(1/2) = -ln(1/2) = ln 2 = 0.6931471805599453...
        let e = entropies(1, &rat(1, 2), 96).unwrap();
        let lo_ref = rat(693_147_180_559_945_309i64, 1_000_000_000_000_000_000i64);
        let hi_ref = rat(693_147_180_559_945_310i64, 1_000_000_000_000_000_000i64);
        assert!(e.renyi2.lo() > &lo_ref && e.renyi2.hi() < &hi_ref);
    }

    #[test]
    fn entropy_symmetry_in_x() {
        for n in [1u32, 3, 6] {
            let a = entropies(n, &rat(1, 5), 64).unwrap();
            let b = entropies(n, &rat(4, 5), 64).unwrap();
            assert_eq!(a.tsallis2, b.tsallis2);
            // F values are identical, so the enclosures coincide too.
            assert_eq!(a.renyi2, b.renyi2);
        }
    }

    #[test]
    fn tsallis_pointwise_examples() {
        // n=1, x=1/4: (1 - 5/8) 4 + 1 = 5/2
        let ic = IcPolynomial::new(1).unwrap();
        let b = ic.bundle(&rat(1, 4)).unwrap();
        let v = (rat_int(1) - &b.f) * &b.f2 + &b.f1 * &b.f1;
        assert_eq!(v, rat(5, 2));
        // n=1, x=1/2: (1/2) 4 + 0 = 2
        let b = ic.bundle(&rat(1, 2)).unwrap();
        let v = (rat_int(1) - &b.f) * &b.f2 + &b.f1 * &b.f1;
        assert_eq!(v, rat_int(2));
    }

    #[test]
    fn corollary_checks_pass_small_orders() {
        let report = check_renyi_concavity(6, &default_unit_grid(2014)).unwrap();
        assert!(report.passed, "witnesses: {:?}", report.witnesses);
        let report = check_tsallis_logconcavity(6, &default_interior_grid(2014)).unwrap();
        assert!(report.passed, "witnesses: {:?}", report.witnesses);
    }

    #[test]
    fn negated_renyi_fails_as_negative_control() {
        // -R_n is convex, not concave: its second derivative is +gap/F^2,
        // strictly positive at interior points, so the concavity check on
        // -R_n must fail there.
        let ic = IcPolynomial::new(2).unwrap();
        let b = ic.bundle(&rat(1, 4)).unwrap();
        let neg_r2_of_negated = -((&b.f2 * &b.f - &b.f1 * &b.f1) / (&b.f * &b.f));
        assert!(neg_r2_of_negated.is_negative());
    }
}
