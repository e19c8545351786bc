//! Outward-rounded interval arithmetic over exact rationals.
//!
//! Inequalities against expressions containing square roots (or logs)
//! cannot be decided in plain rational arithmetic. Instead of floating
//! point we enclose every irrational subexpression in an interval with
//! *rational* endpoints, computed with directed rounding: the true value
//! always lies inside `[lo, hi]`. Rational-vs-rational comparisons on the
//! endpoints are then exact, so an inequality verdict derived from them
//! cannot be flipped by rounding.
//!
//! When an enclosure is too wide to decide a comparison the caller
//! escalates precision (see [`PrecisionLadder`]) and, if the ladder is
//! exhausted, reports the comparison as undecided rather than guessing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{exact_sqrt, rat_to_f64, BigRational};

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

/// Verdict of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    /// The relation holds for every pair of values in the operand intervals.
    Holds,
    /// The relation fails for every pair of values in the operand intervals.
    Fails,
    /// The enclosures overlap; more precision is needed.
    Undecided,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    /// The degenerate interval `[q, q]`.
    pub fn point(q: BigRational) -> Self {
        RatInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Midpoint as an `f64`, for display only.
    pub fn approx(&self) -> f64 {
        rat_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))))
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn add_rat(&self, q: &BigRational) -> Self {
        RatInterval::new(&self.lo + q, &self.hi + q)
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn mul_rat(&self, q: &BigRational) -> Self {
        if q.is_negative() {
            RatInterval::new(&self.hi * q, &self.lo * q)
        } else {
            RatInterval::new(&self.lo * q, &self.hi * q)
        }
    }

    /// Interval division; errors if the divisor encloses zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.lo.is_negative() != other.hi.is_negative() || other.lo.is_zero() || other.hi.is_zero()
        {
            return Err(Error::Interval(format!(
                "division by interval enclosing zero: [{}, {}]",
                other.lo, other.hi
            )));
        }
        let candidates = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        Ok(RatInterval::new(lo, hi))
    }

    /// Square of the interval (tighter than `mul(self, self)` around zero).
    pub fn square(&self) -> Self {
        let lo_sq = &self.lo * &self.lo;
        let hi_sq = &self.hi * &self.hi;
        if !self.lo.is_negative() {
            RatInterval::new(lo_sq, hi_sq)
        } else if !self.hi.is_positive() {
            RatInterval::new(hi_sq, lo_sq)
        } else {
            RatInterval::new(BigRational::zero(), lo_sq.max(hi_sq))
        }
    }

    /// Is `self <= other` certified, refuted, or unresolved at this width?
    pub fn le(&self, other: &Self) -> Certainty {
        if self.hi <= other.lo {
            Certainty::Holds
        } else if self.lo > other.hi {
            Certainty::Fails
        } else {
            Certainty::Undecided
        }
    }

    /// Compare against an exact rational value.
    pub fn le_rat(&self, q: &BigRational) -> Certainty {
        if self.hi <= *q {
            Certainty::Holds
        } else if self.lo > *q {
            Certainty::Fails
        } else {
            Certainty::Undecided
        }
    }

    pub fn ge_rat(&self, q: &BigRational) -> Certainty {
        if self.lo >= *q {
            Certainty::Holds
        } else if self.hi < *q {
            Certainty::Fails
        } else {
            Certainty::Undecided
        }
    }

    /// Does the interval certifiably contain the exact value `q`?
    pub fn contains_rat(&self, q: &BigRational) -> bool {
        self.lo <= *q && *q <= self.hi
    }
}

/// Certified comparison `lhs <= rhs` where `lhs` is exact.
pub fn rat_le_interval(lhs: &BigRational, rhs: &RatInterval) -> Certainty {
    if *lhs <= rhs.lo {
        Certainty::Holds
    } else if *lhs > rhs.hi {
        Certainty::Fails
    } else {
        Certainty::Undecided
    }
}

/// Enclose `sqrt(radicand)` with absolute error below `2^-bits`.
///
/// Perfect rational squares produce a degenerate (point) interval, which
/// is what makes endpoint equalities such as `u_1(1) = B_1(1)` decidable.
pub fn sqrt_interval(radicand: &BigRational, bits: u32) -> Result<RatInterval> {
    if radicand.is_negative() {
        return Err(Error::Interval(format!(
            "square root of negative rational {radicand}"
        )));
    }
    if let Some(root) = exact_sqrt(radicand) {
        return Ok(RatInterval::point(root));
    }
    // sqrt(a/b) = sqrt(a*b)/b; scale by 4^bits so the integer square root
    // carries `bits` fractional bits.
    let a = radicand.numer();
    let b = radicand.denom();
    let scaled = (a * b) << (2 * bits as u64);
    let root = scaled.sqrt();
    let denom = b << (bits as u64);
    let lo = BigRational::new(root.clone(), denom.clone());
    let hi = BigRational::new(root + BigInt::one(), denom);
    Ok(RatInterval::new(lo, hi))
}

/// Enclose `sqrt` of an interval of nonnegative rationals.
pub fn sqrt_of_interval(iv: &RatInterval, bits: u32) -> Result<RatInterval> {
    let lo = sqrt_interval(iv.lo(), bits)?;
    let hi = sqrt_interval(iv.hi(), bits)?;
    Ok(RatInterval::new(lo.lo().clone(), hi.hi().clone()))
}

/// Enclose the natural log of a positive rational with absolute error
/// around `2^-bits`.
///
/// The argument is first rounded outward to dyadic rationals of `bits + 8`
/// fractional bits so that the `atanh` series below runs on small numbers
/// even when `q` has huge numerator and denominator.
pub fn ln_interval(q: &BigRational, bits: u32) -> Result<RatInterval> {
    if !q.is_positive() {
        return Err(Error::Interval(format!("log of non-positive rational {q}")));
    }
    let guard = bits + 8;
    let lo_arg = dyadic_floor(q, guard);
    let hi_arg = dyadic_ceil(q, guard);
    let lo = ln_dyadic(&lo_arg, guard)?;
    let hi = ln_dyadic(&hi_arg, guard)?;
    Ok(RatInterval::new(lo.lo().clone(), hi.hi().clone()))
}

fn dyadic_floor(q: &BigRational, bits: u32) -> BigRational {
    debug_assert!(q.is_positive());
    let scaled = (q.numer() << (bits as u64)) / q.denom();
    BigRational::new(scaled, BigInt::one() << (bits as u64))
}

fn dyadic_ceil(q: &BigRational, bits: u32) -> BigRational {
    debug_assert!(q.is_positive());
    let shifted = q.numer() << (bits as u64);
    let (quot, rem) = shifted.div_rem(q.denom());
    let scaled = if rem.is_zero() { quot } else { quot + BigInt::one() };
    BigRational::new(scaled, BigInt::one() << (bits as u64))
}

/// `ln` of a positive rational with small components, as an enclosure.
fn ln_dyadic(q: &BigRational, bits: u32) -> Result<RatInterval> {
    debug_assert!(q.is_positive());
    // Range-reduce to q = 2^e * r with r in [1, 2).
    let mut e: i64 = q.numer().bits() as i64 - q.denom().bits() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut r = q / pow2(e);
    while r < BigRational::one() {
        e -= 1;
        r = &r * &two;
    }
    while r >= two {
        e += 1;
        r = &r / &two;
    }
    let ln_r = atanh_ln(&r, bits);
    let ln_2 = atanh_ln(&two, bits);
    Ok(ln_r.add(&ln_2.mul_rat(&BigRational::from_integer(BigInt::from(e)))))
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

/// `ln r` for rational `r` in `[1, 2]` via `2 atanh((r-1)/(r+1))`, with an
/// explicit geometric tail bound on the truncated series.
fn atanh_ln(r: &BigRational, bits: u32) -> RatInterval {
    let z = (r - BigRational::one()) / (r + BigRational::one());
    if z.is_zero() {
        return RatInterval::point(BigRational::zero());
    }
    let z2 = &z * &z;
    // z <= 1/3, so each term shrinks by at least 1/9; bits/3 terms suffice
    // with slack.
    let terms = (bits as usize) / 3 + 4;
    let mut sum = BigRational::zero();
    let mut zpow = z.clone();
    for j in 0..terms {
        sum += &zpow / BigRational::from_integer(BigInt::from(2 * j as u64 + 1));
        zpow = &zpow * &z2;
    }
    // Remaining tail: sum_{j>=terms} z^(2j+1)/(2j+1) < z^(2*terms+1)/(1-z^2).
    let tail = &zpow / (BigRational::one() - &z2);
    let lo = &sum * BigRational::from_integer(BigInt::from(2));
    let hi = (&sum + &tail) * BigRational::from_integer(BigInt::from(2));
    RatInterval::new(lo, hi)
}

/// Doubling sequence of working precisions for certified comparisons.
///
/// Comparisons start at the requested precision and escalate until decided
/// or the ladder is exhausted; exhaustion is reported as undecided, never
/// silently resolved.
#[derive(Clone, Copy, Debug)]
pub struct PrecisionLadder {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl PrecisionLadder {
    pub fn new(start_bits: u32) -> Self {
        PrecisionLadder {
            start_bits: start_bits.max(16),
            max_bits: 16_384,
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        let mut bits = Some(self.start_bits.min(max));
        std::iter::from_fn(move || {
            let cur = bits?;
            bits = if cur >= max { None } else { Some((cur * 2).min(max)) };
            Some(cur)
        })
    }
}

/// Run a certified comparison across the ladder: `build(bits)` returns
/// the comparison outcome at one precision; escalate while undecided.
pub fn escalate<F>(ladder: PrecisionLadder, mut build: F) -> Result<Certainty>
where
    F: FnMut(u32) -> Result<Certainty>,
{
    for bits in ladder.steps() {
        match build(bits)? {
            Certainty::Undecided => continue,
            decided => return Ok(decided),
        }
    }
    Ok(Certainty::Undecided)
}

impl std::fmt::Display for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", rat_to_f64(&self.lo), rat_to_f64(&self.hi))
        }
    }
}
