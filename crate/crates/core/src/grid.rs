//! Deterministic evaluation grids.
//!
//! Grids produce exact rational points. Random grids draw `x = a/b` with
//! `1 <= b <= max_denominator` and `a` uniform in `[0, b]` from a seeded
//! ChaCha8 stream (rejection sampling on raw `u64` words, so the point
//! sequence depends only on the seed, not on any RNG library internals),
//! then map linearly onto the requested bounds. Every report derived from
//! a grid records the seed and generator name.

use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{parse_rat, rat_int, BigRational};
use crate::report::SamplerInfo;

/// Name recorded in reports for the random-rational sampler.
pub const RNG_ALGORITHM: &str = "chacha8/u64-rejection";

/// Default denominator cap for random rational points.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

/// A deterministic grid of rational evaluation points.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    /// `count` equally spaced points on the closed interval `[lo, hi]`,
    /// both endpoints included (for `count >= 2`).
    Uniform {
        lo: BigRational,
        hi: BigRational,
        count: u32,
    },
    /// Seeded random rationals mapped onto `[lo, hi]`.
    RandomRational {
        lo: BigRational,
        hi: BigRational,
        count: u32,
        seed: u64,
        max_denominator: u64,
    },
    /// `count` log-spaced points in `(lo, hi]`, as exact dyadic rationals
    /// of the generating `f64` values.
    LogSpaced { lo: f64, hi: f64, count: u32 },
    /// Explicitly listed points.
    Explicit { points: Vec<BigRational> },
    /// Concatenation of several grids, in order.
    Union(Vec<GridSpec>),
}

impl GridSpec {
    /// Materialize the grid points, deterministically.
    pub fn points(&self) -> Vec<BigRational> {
        match self {
            GridSpec::Uniform { lo, hi, count } => {
                if *count == 0 {
                    return Vec::new();
                }
                if *count == 1 {
                    return vec![lo.clone()];
                }
                let step = (hi - lo) / rat_int(i64::from(*count) - 1);
                (0..*count)
                    .map(|i| lo + &step * rat_int(i64::from(i)))
                    .collect()
            }
            GridSpec::RandomRational {
                lo,
                hi,
                count,
                seed,
                max_denominator,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let span = hi - lo;
                (0..*count)
                    .map(|_| {
                        let b = 1 + draw_below(&mut rng, *max_denominator);
                        let a = draw_below(&mut rng, b + 1);
                        let q = BigRational::new(BigInt::from(a), BigInt::from(b));
                        lo + &span * q
                    })
                    .collect()
            }
            GridSpec::LogSpaced { lo, hi, count } => {
                if *count == 0 {
                    return Vec::new();
                }
                let (llo, lhi) = (lo.log10(), hi.log10());
                (1..=*count)
                    .map(|i| {
                        let value = if i == *count {
                            *hi
                        } else {
                            10f64.powf(llo + (lhi - llo) * f64::from(i) / f64::from(*count))
                        };
                        BigRational::from_float(value).expect("log-spaced point is finite")
                    })
                    .collect()
            }
            GridSpec::Explicit { points } => points.clone(),
            GridSpec::Union(parts) => parts.iter().flat_map(|g| g.points()).collect(),
        }
    }

    /// Human-readable description, recorded in reports.
    pub fn describe(&self) -> String {
        match self {
            GridSpec::Uniform { lo, hi, count } => format!("uniform[{lo},{hi}]x{count}"),
            GridSpec::RandomRational {
                lo,
                hi,
                count,
                seed,
                max_denominator,
            } => format!(
                "random-rational[{lo},{hi}]x{count}(seed={seed},max_den={max_denominator})"
            ),
            GridSpec::LogSpaced { lo, hi, count } => format!("log-spaced({lo},{hi}]x{count}"),
            GridSpec::Explicit { points } => {
                if points.len() <= 4 {
                    let list: Vec<String> = points.iter().map(|p| p.to_string()).collect();
                    format!("explicit{{{}}}", list.join(","))
                } else {
                    format!("explicit{{{} points}}", points.len())
                }
            }
            GridSpec::Union(parts) => parts
                .iter()
                .map(|g| g.describe())
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    /// First seed used anywhere in the grid, if any.
    pub fn seed(&self) -> Option<u64> {
        match self {
            GridSpec::RandomRational { seed, .. } => Some(*seed),
            GridSpec::Union(parts) => parts.iter().find_map(|g| g.seed()),
            _ => None,
        }
    }

    pub fn sampler_info(&self) -> SamplerInfo {
        let seed = self.seed();
        SamplerInfo {
            grid: self.describe(),
            rng: seed.map(|_| RNG_ALGORITHM.to_string()),
            seed,
        }
    }

    /// The maximal runs of consecutive uniform points, for second-difference
    /// confirmations that need equally spaced samples.
    pub fn uniform_runs(&self) -> Vec<Vec<BigRational>> {
        match self {
            GridSpec::Uniform { .. } => vec![self.points()],
            GridSpec::Union(parts) => parts.iter().flat_map(|g| g.uniform_runs()).collect(),
            _ => Vec::new(),
        }
    }

    /// Parse a grid from CLI syntax. Grids can be unioned with `+`:
    ///
    /// * `uniform:LO:HI:COUNT`
    /// * `random:LO:HI:COUNT:SEED[:MAX_DEN]`
    /// * `logt:LO:HI:COUNT`
    /// * `explicit:P1,P2,...`
    pub fn parse(text: &str) -> Result<GridSpec> {
        let parts: Vec<GridSpec> = text
            .split('+')
            .map(|s| Self::parse_single(s.trim()))
            .collect::<Result<_>>()?;
        match parts.len() {
            0 => Err(Error::Parse("empty grid specification".into())),
            1 => Ok(parts.into_iter().next().unwrap()),
            _ => Ok(GridSpec::Union(parts)),
        }
    }

    fn parse_single(text: &str) -> Result<GridSpec> {
        let fields: Vec<&str> = text.split(':').collect();
        let usage = || Error::Parse(format!("malformed grid specification {text:?}"));
        match fields.first() {
            Some(&"uniform") if fields.len() == 4 => Ok(GridSpec::Uniform {
                lo: parse_rat(fields[1])?,
                hi: parse_rat(fields[2])?,
                count: fields[3].parse().map_err(|_| usage())?,
            }),
            Some(&"random") if fields.len() == 5 || fields.len() == 6 => {
                Ok(GridSpec::RandomRational {
                    lo: parse_rat(fields[1])?,
                    hi: parse_rat(fields[2])?,
                    count: fields[3].parse().map_err(|_| usage())?,
                    seed: fields[4].parse().map_err(|_| usage())?,
                    max_denominator: if fields.len() == 6 {
                        fields[5].parse().map_err(|_| usage())?
                    } else {
                        DEFAULT_MAX_DENOMINATOR
                    },
                })
            }
            Some(&"logt") if fields.len() == 4 => {
                let lo: f64 = fields[1].parse().map_err(|_| usage())?;
                let hi: f64 = fields[2].parse().map_err(|_| usage())?;
                if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
                    return Err(usage());
                }
                Ok(GridSpec::LogSpaced {
                    lo,
                    hi,
                    count: fields[3].parse().map_err(|_| usage())?,
                })
            }
            Some(&"explicit") if fields.len() == 2 => {
                let points: Vec<BigRational> = fields[1]
                    .split(',')
                    .map(parse_rat)
                    .collect::<Result<_>>()?;
                Ok(GridSpec::Explicit { points })
            }
            _ => Err(usage()),
        }
    }
}

/// Uniform draw in `[0, m)` from raw u64 words with rejection.
fn draw_below(rng: &mut ChaCha8Rng, m: u64) -> u64 {
    debug_assert!(m > 0);
    // Reject the partial block at the top of the u64 range so every
    // residue is equally likely. r = 2^64 mod m.
    let r = ((u64::MAX % m) + 1) % m;
    if r == 0 {
        return rng.next_u64() % m;
    }
    let threshold = 0u64.wrapping_sub(r);
    loop {
        let v = rng.next_u64();
        if v < threshold {
            return v % m;
        }
    }
}

/// Default `x` grid on `[0, 1]`: 257 uniform points plus 100 seeded
/// random rationals.
pub fn default_unit_grid(seed: u64) -> GridSpec {
    unit_grid(seed, DEFAULT_MAX_DENOMINATOR)
}

pub fn unit_grid(seed: u64, max_denominator: u64) -> GridSpec {
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
            seed,
            max_denominator,
        },
    ])
}

/// Default `x` grid on `[0, 1/2)`: 128 uniform points `i/256` plus 100
/// seeded random rationals in `[0, 1/2]` (consumers skip `x = 1/2`, which
/// the sampler hits only with negligible probability).
pub fn default_half_open_grid(seed: u64) -> GridSpec {
    half_open_grid(seed, DEFAULT_MAX_DENOMINATOR)
}

pub fn half_open_grid(seed: u64, max_denominator: u64) -> GridSpec {
    GridSpec::Union(vec![
        GridSpec::Uniform {
            lo: rat_int(0),
            hi: BigRational::new(BigInt::from(127), BigInt::from(256)),
            count: 128,
        },
        GridSpec::RandomRational {
            lo: rat_int(0),
            hi: BigRational::new(BigInt::from(1), BigInt::from(2)),
            count: 100,
            seed,
            max_denominator,
        },
    ])
}

/// Default interior grid on `(0, 1)`: 255 uniform points `i/256` plus
/// seeded random rationals (consumers skip exact endpoints).
pub fn default_interior_grid(seed: u64) -> GridSpec {
    interior_grid(seed, DEFAULT_MAX_DENOMINATOR)
}

pub fn interior_grid(seed: u64, max_denominator: u64) -> GridSpec {
    GridSpec::Union(vec![
        GridSpec::Uniform {
            lo: BigRational::new(BigInt::from(1), BigInt::from(256)),
            hi: BigRational::new(BigInt::from(255), BigInt::from(256)),
            count: 255,
        },
        GridSpec::RandomRational {
            lo: rat_int(0),
            hi: rat_int(1),
            count: 100,
            seed,
            max_denominator,
        },
    ])
}

/// Default `t` grid: `{1}` plus 100 log-spaced points in `(1, 10^3]`.
pub fn default_t_grid() -> GridSpec {
    GridSpec::Union(vec![
        GridSpec::Explicit {
            points: vec![rat_int(1)],
        },
        GridSpec::LogSpaced {
            lo: 1.0,
            hi: 1_000.0,
            count: 100,
        },
    ])
}

/// Default induction-step grid: `{1}` (exact endpoint) plus 200
/// log-spaced points in `(1, 10^2]`.
pub fn default_induction_grid() -> GridSpec {
    GridSpec::Union(vec![
        GridSpec::Explicit {
            points: vec![rat_int(1)],
        },
        GridSpec::LogSpaced {
            lo: 1.0,
            hi: 100.0,
            count: 200,
        },
    ])
}
