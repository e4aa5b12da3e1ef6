use thiserror::Error;

use crate::algebra::RingTag;

/// Errors produced by the series engine, the model catalog and the oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: RingTag, found: RingTag },

    #[error("stride mismatch: {0} vs {1}")]
    StrideMismatch(usize, usize),

    #[error("composition requires zero constant term")]
    NonZeroConstantTerm,

    #[error("multiplicative inverse requires constant term 1")]
    ConstantTermNotOne,

    #[error("compositional inverse requires c_0 = 0 and c_1 = 1")]
    NotInvertibleForSubstitution,

    #[error("derivative of an order-0 series")]
    DerivativeOfOrderZero,

    #[error("sequence is not {0}-periodic")]
    NotPeriodic(usize),

    #[error("constant term violates the {kind} decomposition (expected A_0 = {expected})")]
    ConstantTermCondition { kind: &'static str, expected: u8 },

    #[error("double factorial undefined for {0}")]
    DoubleFactorialDomain(i64),

    #[error("size {size} exceeds the enumeration cap {cap}")]
    OverCap { size: usize, cap: usize },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("total weight vanishes at size {0}")]
    ZeroWeight(usize),

    #[error("size {size} is not a multiple of the stride {stride}")]
    OffStride { size: usize, stride: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
