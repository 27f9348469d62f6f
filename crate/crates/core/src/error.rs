use thiserror::Error;

/// Errors produced by samplers, partition operations and statistical tests.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite or non-positive input at position {0}")]
    NonFiniteInput(usize),
    #[error("residual mass {0} is too large for an exact size-biased permutation")]
    ResidualTooLarge(f64),
    #[error("invalid mass partition: {0}")]
    InvalidPartition(String),
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("cdf is not monotone into [0, 1] near x = {0}")]
    NonMonotoneCdf(f64),
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("entry {0} of the sequence is not strictly positive")]
    NonPositiveEntry(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}

/// Fails with `InvalidParameter` unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, value, "must be finite and > 0"))
    }
}
