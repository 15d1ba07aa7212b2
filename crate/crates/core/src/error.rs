use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-invertible series: constant term is {0}")]
    NonInvertible(BigInt),

    #[error("divergent product: parameter {0} has exponent 0")]
    DivergentProduct(String),

    #[error("coefficient of q^{n} is beyond truncation order {order}")]
    BeyondTruncation { n: usize, order: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("n = {n} exceeds the {tier} cap of {cap}")]
    CapExceeded { tier: &'static str, n: usize, cap: usize },

    #[error("unsupported constraint for this oracle: {0}")]
    UnsupportedMode(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range [{lo}, {hi}] exceeds sequence coverage (length {len})")]
    Coverage { lo: usize, hi: usize, len: usize },

    #[error(
        "tier disagreement on {} at n = {}: {} gives {}, {} gives {}",
        .0.quantity, .0.n, .0.tier_a, .0.value_a, .0.tier_b, .0.value_b
    )]
    TierDisagreement(Box<Disagreement>),
}

/// First index where two evaluation tiers differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub quantity: String,
    pub n: usize,
    pub tier_a: String,
    pub value_a: BigInt,
    pub tier_b: String,
    pub value_b: BigInt,
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
