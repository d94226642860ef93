use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be a positive integer")]
    ZeroArgument,

    #[error("iteration index must be at least 1")]
    ZeroIndex,

    #[error("sieve limit {0} is too small")]
    SieveLimitTooSmall(u64),

    #[error("{n} is beyond the sieve limit {limit}")]
    BeyondSieveLimit { n: u64, limit: u64 },

    #[error("invalid prime factorization: {0}")]
    InvalidFactorization(String),

    #[error("divisor tree for {n} needs {required} nodes, which exceeds the budget of {budget}")]
    NodeBudgetExceeded {
        n: u64,
        budget: u64,
        required: BigUint,
    },

    #[error(
        "multi-sum and double-sum evaluations disagree at n = {n}: {multi_sum} vs {double_sum}"
    )]
    ConjectureMismatch {
        n: BigUint,
        multi_sum: BigUint,
        double_sum: BigUint,
    },

    #[error("line {line}: {reason}")]
    BFileParse { line: usize, reason: String },

    #[error("line {line}: non-consecutive index, expected {expected} but found {found}")]
    BFileGap {
        line: usize,
        expected: i64,
        found: i64,
    },

    #[error("invalid tree JSON: {0}")]
    TreeJson(#[from] serde_json::Error),
}
