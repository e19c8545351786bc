//! The one-parameter distribution family at `c in {-1, 0, 1}` and its
//! index of coincidence `S_{n,c}(x) = sum_k (p_{n,k}(x))^2`.
//!
//! * `c = -1`: binomial, `p_k = C(n,k) x^k (1-x)^(n-k)`, `x in [0, 1]`,
//!   integer `n`. `S` is the exact polynomial from
//!   [`crate::binomial_ic`]; the float path here recomputes it from pmf
//!   logarithms as an independent route.
//! * `c = 0`: Poisson with mean `n x`, `p_k = e^(-nx) (nx)^k / k!`.
//! * `c = 1`: negative binomial, `p_k = C(n+k-1,k) x^k (1+x)^(-n-k)`.
//!
//! `n` may be any positive real for `c >= 0`. The infinite sums truncate
//! with a certified geometric tail bound: once every later term ratio is
//! provably at most `q < 1`, the remaining tail is at most
//! `t_next / (1 - q)`, and summation stops when that bound drops below
//! `trunc_tol` times the partial sum. An inconclusive ratio test within
//! the term cap is reported as an error, never silently accepted.
//!
//! Squared probabilities underflow quickly (`pmf^2` reaches `1e-308`
//! around `pmf = 1e-154`), so float accumulation runs in the log domain
//! with a running-maximum shift.

use num_traits::{Signed, ToPrimitive};

use crate::binomial_ic::IcPolynomial;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::rational::{binomial, rat_int, rat_to_f64, BigRational};
use crate::report::{PointOutcome, ReportBuilder, Slack};
use crate::CheckReport;

/// Hard cap on series terms before the truncation is declared failed.
pub const TERM_CAP: u64 = 1_000_000;

/// Default relative tail tolerance for the infinite sums.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-13;

/// Default upper end of the parameter domain for `c >= 0`.
pub const DEFAULT_X_MAX: f64 = 10.0;

/// Which member of the family, with its parameter domain and truncation
/// tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyConfig {
    /// `-1` (binomial), `0` (Poisson) or `1` (negative binomial).
    pub c: i32,
    /// Number of trials / rate multiplier; a positive integer when
    /// `c = -1`, any positive real otherwise.
    pub n: f64,
    /// Upper end of the parameter domain for `c >= 0` (the binomial
    /// domain is always `[0, 1]`).
    pub x_max: f64,
    /// Relative tail tolerance for truncated sums, in `(0, 1e-6]`.
    pub trunc_tol: f64,
}

impl FamilyConfig {
    pub fn new(c: i32, n: f64) -> Result<Self> {
        Self::with_options(c, n, DEFAULT_X_MAX, DEFAULT_TRUNC_TOL)
    }

    pub fn with_options(c: i32, n: f64, x_max: f64, trunc_tol: f64) -> Result<Self> {
        if !matches!(c, -1 | 0 | 1) {
            return Err(Error::Config(format!(
                "c must be -1, 0 or 1 (got {c}); the general real-c family has no closed pmf here"
            )));
        }
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Config(format!("n must be positive (got {n})")));
        }
        if c == -1 && (n.fract() != 0.0 || n > f64::from(crate::binomial_ic::DEFAULT_MAX_ORDER)) {
            return Err(Error::Config(format!(
                "the binomial case requires integer n <= {} (got {n})",
                crate::binomial_ic::DEFAULT_MAX_ORDER
            )));
        }
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(Error::Config(format!("x_max must be positive (got {x_max})")));
        }
        if !(trunc_tol > 0.0 && trunc_tol <= 1e-6) {
            return Err(Error::Config(format!(
                "trunc_tol must lie in (0, 1e-6] (got {trunc_tol})"
            )));
        }
        Ok(FamilyConfig {
            c,
            n,
            x_max,
            trunc_tol,
        })
    }

    /// The parameter interval `I_c` as floats.
    pub fn domain(&self) -> (f64, f64) {
        if self.c == -1 {
            (0.0, 1.0)
        } else {
            (0.0, self.x_max)
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::domain(x, format!("[{lo}, {hi}] (I_c for c={})", self.c)));
        }
        Ok(())
    }

    fn binomial_order(&self) -> u32 {
        debug_assert_eq!(self.c, -1);
        self.n as u32
    }
}

/// Index-of-coincidence value with its truncation certificate.
#[derive(Clone, Debug)]
pub struct ICValue {
    /// Float value of `S_{n,c}(x)`.
    pub value: f64,
    /// Number of series terms accumulated.
    pub terms_used: u64,
    /// Certified bound on the truncated tail (zero for finite sums).
    pub tail_bound: f64,
    /// Exact rational value, present for the binomial case.
    pub exact: Option<BigRational>,
}

/// Probability mass function of the configured family member.
pub fn pmf(cfg: &FamilyConfig, k: u64, x: f64) -> Result<f64> {
    cfg.check_x(x)?;
    match cfg.c {
        -1 => {
            let n = cfg.binomial_order() as u64;
            if k > n {
                return Err(Error::domain(k, format!("k <= n = {n} for the binomial")));
            }
            if x == 0.0 {
                return Ok(if k == 0 { 1.0 } else { 0.0 });
            }
            if x == 1.0 {
                return Ok(if k == n { 1.0 } else { 0.0 });
            }
            let ln_c = binomial(n, k).to_f64().expect("binomial fits f64").ln();
            Ok((ln_c + k as f64 * x.ln() + (n - k) as f64 * (-x).ln_1p()).exp())
        }
        0 => {
            let lambda = cfg.n * x;
            if lambda == 0.0 {
                return Ok(if k == 0 { 1.0 } else { 0.0 });
            }
            Ok((k as f64 * lambda.ln() - libm::lgamma(k as f64 + 1.0) - lambda).exp())
        }
        1 => {
            if x == 0.0 {
                return Ok(if k == 0 { 1.0 } else { 0.0 });
            }
            let n = cfg.n;
            let ln_coeff =
                libm::lgamma(n + k as f64) - libm::lgamma(n) - libm::lgamma(k as f64 + 1.0);
            Ok((ln_coeff + k as f64 * x.ln() - (n + k as f64) * x.ln_1p()).exp())
        }
        _ => unreachable!("validated in FamilyConfig::new"),
    }
}

/// The index of coincidence `S_{n,c}(x)`.
///
/// For `c = -1` the exact rational value rides along with the float; for
/// `c in {0, 1}` the sum truncates under the certified geometric rule.
pub fn index_of_coincidence(cfg: &FamilyConfig, x: &BigRational) -> Result<ICValue> {
    let xf = rat_to_f64(x);
    cfg.check_x(xf)?;
    match cfg.c {
        -1 => {
            if x.is_negative() || x > &rat_int(1) {
                return Err(Error::domain(x, "[0, 1]"));
            }
            let n = cfg.binomial_order();
            let exact = IcPolynomial::new(n)?.poly().eval(x);
            Ok(ICValue {
                value: binomial_ic_float(n, xf),
                terms_used: u64::from(n) + 1,
                tail_bound: 0.0,
                exact: Some(exact),
            })
        }
        0 => poisson_ic_direct(cfg.n * xf, cfg.trunc_tol),
        1 => negative_binomial_ic(cfg.n, xf, cfg.trunc_tol),
        _ => unreachable!(),
    }
}

/// Float-path binomial index of coincidence via pmf logarithms.
///
/// Exact binomial coefficients enter through their (correctly rounded)
/// `f64` logs; the inner products `k ln x` and `(n-k) ln(1-x)` are formed
/// with compensated arithmetic, and the shifted exponential sum uses
/// Neumaier summation, keeping the total relative error below `2^-45`
/// for `n <= 100`.
pub fn binomial_ic_float(n: u32, x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 1.0;
    }
    let ln_x = x.ln();
    let ln_1mx = (-x).ln_1p();
    let n_u = n as u64;
    let mut exponents = Vec::with_capacity(n as usize + 1);
    let mut coeff = num_bigint::BigInt::from(1u32);
    for k in 0..=n_u {
        let ln_c = coeff.to_f64().expect("binomial fits f64").ln();
        let (p1, e1) = two_prod(k as f64, ln_x);
        let (p2, e2) = two_prod((n_u - k) as f64, ln_1mx);
        let (s1, e3) = two_sum(ln_c, p1);
        let (s2, e4) = two_sum(s1, p2);
        exponents.push(2.0 * (s2 + (e1 + e2 + e3 + e4)));
        if k < n_u {
            coeff = coeff * num_bigint::BigInt::from(n_u - k) / num_bigint::BigInt::from(k + 1);
        }
    }
    let shift = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // Neumaier summation of the shifted exponentials.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &h in &exponents {
        let term = (h - shift).exp();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    (sum + comp) * shift.exp()
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Poisson index of coincidence by direct summation of squared pmf terms
/// `t_k = (e^(-L) L^k / k!)^2` with the certified truncation rule.
fn poisson_ic_direct(lambda: f64, trunc_tol: f64) -> Result<ICValue> {
    if lambda == 0.0 {
        return Ok(ICValue {
            value: 1.0,
            terms_used: 1,
            tail_bound: 0.0,
            exact: None,
        });
    }
    // Ratios (L/(k+1))^2 strictly decrease, so the geometric bound with
    // the next ratio certifies the whole tail.
    if 2.0 * lambda <= 600.0 {
        let mut term = (-2.0 * lambda).exp();
        let mut sum = term;
        for k in 0..TERM_CAP {
            let ratio = (lambda / (k as f64 + 1.0)).powi(2);
            let next = term * ratio;
            if ratio < 1.0 {
                let tail = next / (1.0 - ratio);
                if tail < trunc_tol * sum {
                    return Ok(ICValue {
                        value: sum,
                        terms_used: k + 1,
                        tail_bound: tail,
                        exact: None,
                    });
                }
            }
            term = next;
            sum += term;
        }
        Err(Error::Truncation {
            terms: TERM_CAP,
            tail_bound: term,
        })
    } else {
        // Large rate: stay in the log domain.
        let ln2l = lambda.ln();
        let mut acc = LogSumAccumulator::new();
        let mut ln_term = -2.0 * lambda;
        acc.push(ln_term);
        for k in 0..TERM_CAP {
            let ratio = (lambda / (k as f64 + 1.0)).powi(2);
            let ln_next = 2.0 * ((k as f64 + 1.0) * ln2l - libm::lgamma(k as f64 + 2.0)) - 2.0 * lambda;
            if ratio < 1.0 {
                let tail = (ln_next - acc.shift).exp() / (1.0 - ratio);
                if tail < trunc_tol * acc.scaled_sum {
                    return Ok(ICValue {
                        value: acc.value(),
                        terms_used: k + 1,
                        tail_bound: tail * acc.shift.exp(),
                        exact: None,
                    });
                }
            }
            ln_term = ln_next;
            acc.push(ln_term);
        }
        Err(Error::Truncation {
            terms: TERM_CAP,
            tail_bound: (ln_term - acc.shift).exp() * acc.shift.exp(),
        })
    }
}

/// Negative binomial index of coincidence; always log-domain (the gamma
/// ratios overflow long before the series converges).
fn negative_binomial_ic(n: f64, x: f64, trunc_tol: f64) -> Result<ICValue> {
    if x == 0.0 {
        return Ok(ICValue {
            value: 1.0,
            terms_used: 1,
            tail_bound: 0.0,
            exact: None,
        });
    }
    let ln_x = x.ln();
    let ln_1px = x.ln_1p();
    let lg_n = libm::lgamma(n);
    // Squared ratio of consecutive terms: ((n+k)/(k+1) * x/(1+x))^2.
    // Decreasing in k for n >= 1, increasing toward the limit for n < 1,
    // so the max of the next ratio and the limit bounds every later one.
    let rho = (x / (1.0 + x)).powi(2);
    let ln_term_at = |k: f64| -> f64 {
        2.0 * (libm::lgamma(n + k) - lg_n - libm::lgamma(k + 1.0) + k * ln_x - (n + k) * ln_1px)
    };
    let mut acc = LogSumAccumulator::new();
    acc.push(ln_term_at(0.0));
    for k in 0..TERM_CAP {
        let kf = k as f64;
        let ratio = ((n + kf) / (kf + 1.0)).powi(2) * rho;
        let q = ratio.max(rho);
        let ln_next = ln_term_at(kf + 1.0);
        if q < 1.0 {
            let tail = (ln_next - acc.shift).exp() / (1.0 - q);
            if tail < trunc_tol * acc.scaled_sum {
                return Ok(ICValue {
                    value: acc.value(),
                    terms_used: k + 1,
                    tail_bound: tail * acc.shift.exp(),
                    exact: None,
                });
            }
        }
        acc.push(ln_next);
    }
    Err(Error::Truncation {
        terms: TERM_CAP,
        tail_bound: f64::NAN,
    })
}

/// Streaming log-sum-exp with a running maximum shift.
struct LogSumAccumulator {
    shift: f64,
    scaled_sum: f64,
}

impl LogSumAccumulator {
    fn new() -> Self {
        LogSumAccumulator {
            shift: f64::NEG_INFINITY,
            scaled_sum: 0.0,
        }
    }

    fn push(&mut self, ln_term: f64) {
        if ln_term > self.shift {
            if self.scaled_sum > 0.0 {
                self.scaled_sum *= (self.shift - ln_term).exp();
            }
            self.shift = ln_term;
            self.scaled_sum += 1.0;
        } else {
            self.scaled_sum += (ln_term - self.shift).exp();
        }
    }

    fn value(&self) -> f64 {
        self.scaled_sum * self.shift.exp()
    }
}

/// Independent Poisson oracle: `S_{n,0}(x) = e^(-2nx) I_0(2nx)` with the
/// modified Bessel function summed by its own series
/// `I_0(z) = sum_k (z/2)^(2k) / (k!)^2`.
pub fn poisson_ic_bessel(n: f64, x: f64, bits: u32) -> f64 {
    let z = 2.0 * n * x;
    if z == 0.0 {
        return 1.0;
    }
    let eps = 2f64.powi(-(bits.min(64) as i32));
    if z <= 700.0 {
        // Direct series: term_{k+1} = term_k * (z/2)^2 / (k+1)^2.
        let w = (z / 2.0) * (z / 2.0);
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut k = 0.0f64;
        loop {
            k += 1.0;
            term *= w / (k * k);
            sum += term;
            if term < sum * eps && w / ((k + 1.0) * (k + 1.0)) < 1.0 {
                break;
            }
        }
        (-z).exp() * sum
    } else {
        // Scaled series in the log domain for very large arguments.
        let ln_half_z = (z / 2.0).ln();
        let mut acc = LogSumAccumulator::new();
        let mut k = 0.0f64;
        loop {
            let ln_term = 2.0 * (k * ln_half_z - libm::lgamma(k + 1.0)) - z;
            acc.push(ln_term);
            let ratio = (z / (2.0 * (k + 1.0))).powi(2);
            if ratio < 1.0 && (ln_term - acc.shift).exp() * ratio / (1.0 - ratio) < eps * acc.scaled_sum
            {
                break;
            }
            k += 1.0;
        }
        acc.value()
    }
}

/// Floating-point log-convexity scan: second differences of `ln S` on a
/// uniform grid must clear `-eps_tol`, where
/// `eps_tol = 8 (trunc_tol + 2^-40)` covers truncation and rounding (a
/// second difference touches four log evaluations, each off by at most
/// `~2 max(trunc_tol, rounding)` in the log). This is numerical evidence
/// for the conjectured log-convexity, not a proof; reports are labeled
/// as numeric scans.
pub fn scan_logconvexity_numeric(cfg: &FamilyConfig, x_grid: &GridSpec) -> Result<CheckReport> {
    let GridSpec::Uniform { .. } = x_grid else {
        return Err(Error::Config(
            "log-convexity scans need a uniformly spaced grid".into(),
        ));
    };
    let points = x_grid.points();
    if points.len() < 3 {
        return Err(Error::Config("scan grid needs at least 3 points".into()));
    }
    let eps_tol = 8.0 * (cfg.trunc_tol + 2f64.powi(-40));
    let mut builder = ReportBuilder::new(
        format!("numeric scan: log-convexity of S (c={}, n={})", cfg.c, cfg.n),
        x_grid.sampler_info(),
    );
    let n_label = if cfg.c == -1 { cfg.n as u32 } else { 0 };
    let logs: Vec<f64> = points
        .iter()
        .map(|x| -> Result<f64> {
            let ic = index_of_coincidence(cfg, x)?;
            Ok(ic.value.ln())
        })
        .collect::<Result<_>>()?;
    for i in 1..points.len() - 1 {
        let d2 = logs[i + 1] - 2.0 * logs[i] + logs[i - 1];
        let slack = d2 + eps_tol;
        builder.record(if slack < 0.0 {
            PointOutcome::fail(
                n_label,
                &points[i],
                d2.to_string(),
                format!("-{eps_tol}"),
                "second difference of ln S",
                Some(Slack::Approx(slack)),
            )
        } else {
            PointOutcome::pass(n_label, &points[i], Slack::Approx(slack))
        });
    }
    Ok(builder.finish())
}
