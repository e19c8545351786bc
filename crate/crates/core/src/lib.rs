//! Exact-arithmetic verification of log-convexity for the index of
//! coincidence of the binomial family.
//!
//! The index of coincidence of a discrete distribution is the sum of its
//! squared probabilities (the collision probability of two independent
//! draws). For the binomial distribution with `n` trials and success
//! probability `x` it is the polynomial
//!
//! ```text
//! F_n(x) = sum_{k=0}^{n} ( C(n,k) x^k (1-x)^{n-k} )^2
//! ```
//!
//! This crate machine-checks, in exact rational arithmetic, every identity
//! and inequality in the proof that `F_n` is log-convex on `[0,1]`:
//!
//! * the symmetry `F_n(1-x) = F_n(x)` at coefficient level,
//! * the Heun-type differential equation satisfied by `F_n`,
//! * the Legendre-ratio bound `0 <= u_n(t) <= B_n(t)` with `u_n = P_n'/P_n`,
//! * the induction step of that bound's proof,
//! * the log-derivative identity connecting `F_n'/F_n` to `u_n`,
//! * the root sandwich `z1 <= F_n'/F_n <= z2` and the resulting
//!   quadratic-form inequality,
//! * the sign of the log-convexity gap `F_n'' F_n - (F_n')^2`,
//! * the entropy corollaries (order-2 Renyi concavity, Tsallis
//!   log-concavity),
//!
//! plus floating-point log-convexity scans of the Poisson and negative
//! binomial members of the family.
//!
//! Comparisons against irrational square roots use outward-rounded rational
//! interval arithmetic with precision escalation, so no inequality verdict
//! ever depends on silent floating-point rounding.

pub mod binomial_ic;
pub mod convexity;
pub mod entropy;
pub mod error;
pub mod family;
pub mod grid;
pub mod interval;
pub mod legendre;
pub mod poly;
pub mod rational;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use interval::{Certainty, RatInterval};
pub use poly::IntPolynomial;
pub use rational::BigRational;
pub use report::{CheckReport, Margin, SamplerInfo, SuiteReport, Witness};
