use thiserror::Error;

/// Errors surfaced by the verification library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order n={n} outside supported range 1..={cap}")]
    OrderOutOfRange { n: u64, cap: u64 },

    #[error("{value} outside domain {domain}")]
    OutOfDomain { value: String, domain: String },

    #[error("series truncation failed after {terms} terms (tail bound {tail_bound:e} above tolerance)")]
    Truncation { terms: u64, tail_bound: f64 },

    #[error("interval arithmetic: {0}")]
    Interval(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(value: impl std::fmt::Display, domain: impl Into<String>) -> Self {
        Error::OutOfDomain {
            value: value.to_string(),
            domain: domain.into(),
        }
    }
}
