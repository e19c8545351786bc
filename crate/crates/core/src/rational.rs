//! Arbitrary-precision rational scalars and conversions.
//!
//! All exact evaluation in this crate happens over `BigRational`
//! (`num_rational::Ratio<BigInt>`), which already maintains the invariants
//! we rely on: values stored in lowest terms with a positive denominator.
//! This module adds the conversions the crate needs around it: parsing the
//! `p/q` transport format, decimal literals, and a scaling-safe conversion
//! to `f64` that works even when numerator and denominator are far outside
//! the `f64` range individually.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Shorthand for small rational constants.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for integer-valued rationals.
pub fn rat_int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parse a rational from `p/q`, an integer literal, or a plain decimal
/// such as `1.25` (converted exactly as `125/100`).
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if int_part.contains('/') || frac_part.contains('/') {
            return Err(Error::Parse(format!("malformed rational literal {s:?}")));
        }
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        let digits = format!(
            "{}{}",
            if int_digits.is_empty() { "0" } else { int_digits },
            frac_part
        );
        let numer: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("malformed decimal literal {s:?}")))?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(BigRational::new(numer * BigInt::from(sign), denom));
    }
    s.parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("malformed rational literal {s:?}: {e}")))
}

/// Round a rational to the nearest `f64`, scaling first so that huge
/// numerators/denominators cannot overflow to `inf/inf`.
///
/// The result is within 2 ulp of the true value; magnitudes outside the
/// `f64` range round to `0.0` or `±inf` as appropriate.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let numer = q.numer().abs();
    let denom = q.denom().clone();

    // Shift the quotient into a ~64-bit integer, convert, then undo the
    // shift in the float exponent.
    let nbits = numer.bits() as i64;
    let dbits = denom.bits() as i64;
    let shift = 64 - (nbits - dbits);
    let scaled = if shift >= 0 {
        (numer << shift as u64) / denom
    } else {
        numer / (denom << (-shift) as u64)
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::INFINITY);
    let magnitude = if shift.unsigned_abs() > 2000 {
        // Far outside the f64 exponent range either way.
        if shift > 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        mantissa * 2f64.powi(-shift as i32)
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `true` iff the rational is an exact square, returning its square root.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let sn = sqrt_if_square(q.numer())?;
    let sd = sqrt_if_square(q.denom())?;
    Some(BigRational::new(sn, sd))
}

fn sqrt_if_square(v: &BigInt) -> Option<BigInt> {
    if v.sign() == Sign::Minus {
        return None;
    }
    let root = v.sqrt();
    if &(&root * &root) == v {
        Some(root)
    } else {
        None
    }
}
