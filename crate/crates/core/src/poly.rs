//! Dense integer-coefficient polynomials.
//!
//! Just enough exact polynomial arithmetic for the verification: addition,
//! convolution products, formal derivatives, the substitution `x -> 1-x`,
//! and evaluation at rationals. Coefficients are arbitrary-precision
//! integers because the squared-binomial polynomials grow combinatorially.
//! No GCD, factorization, or floating-point fast paths.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::BigRational;

/// A polynomial `sum_i coeffs[i] x^i` with `BigInt` coefficients.
///
/// Invariant: the last stored coefficient is nonzero; the zero polynomial
/// stores no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// Build from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the convention that the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = BigInt::zero();
            if let Some(a) = self.coeffs.get(i) {
                c += a;
            }
            if let Some(b) = other.coeffs.get(i) {
                c += b;
            }
            out.push(c);
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend_from_slice(&self.coeffs);
        IntPolynomial { coeffs: out }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Exact formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Exact evaluation at a rational point.
    ///
    /// For `x = a/b` in lowest terms this computes the integer Horner form
    /// `sum_i c_i a^i b^(d-i)` over `b^d`, avoiding intermediate rational
    /// reductions.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let a = x.numer();
        let b = x.denom();
        let d = self.degree();
        if b.is_one() {
            let mut acc = self.coeffs[d].clone();
            for i in (0..d).rev() {
                acc = acc * a + &self.coeffs[i];
            }
            return BigRational::from_integer(acc);
        }
        let mut bpow = Vec::with_capacity(d + 1);
        bpow.push(BigInt::one());
        for i in 1..=d {
            let next = &bpow[i - 1] * b;
            bpow.push(next);
        }
        let mut acc = self.coeffs[d].clone();
        for i in (0..d).rev() {
            acc = acc * a + &self.coeffs[i] * &bpow[d - i];
        }
        let denom = bpow.pop().expect("power table is non-empty");
        BigRational::new(acc, denom)
    }

    /// The composition `p(1 - x)`, expanded.
    pub fn compose_one_minus_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // Horner over the ring of polynomials: acc <- acc * (1 - x) + c_i.
        let mut acc: Vec<BigInt> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            // acc * (1 - x): out[j] = acc[j] - acc[j-1]
            let mut next = Vec::with_capacity(acc.len() + 1);
            for j in 0..=acc.len() {
                let mut v = BigInt::zero();
                if j < acc.len() {
                    v += &acc[j];
                }
                if j > 0 {
                    v -= &acc[j - 1];
                }
                next.push(v);
            }
            next[0] += c;
            acc = next;
        }
        Self::from_coeffs(acc)
    }

    /// Sum of all coefficients, i.e. the value at `x = 1`.
    pub fn coeff_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}
