use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("densifying {needed} entries exceeds the entry budget of {budget}")]
    EntryBudgetExceeded { needed: u64, budget: u64 },

    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },

    #[error("order must be at least {min}, got {got}")]
    InvalidOrder { min: usize, got: usize },

    #[error("witness set is empty")]
    EmptyWitnessSet,

    #[error(
        "Luxemburg bisection stopped after {iterations} iterations with residual {residual:e}"
    )]
    ToleranceNotReached { iterations: usize, residual: f64 },

    #[error("blocks {first} and {second} overlap")]
    BlockOverlap { first: usize, second: usize },

    #[error("block {index} is not normalized (norm {norm})")]
    BlockNotNormalized { index: usize, norm: f64 },

    #[error("family member {index} is the zero vector")]
    ZeroVectorInFamily { index: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("operator is not triangular: entry (out {out_order}, in {in_order}) must be zero")]
    NotTriangular { out_order: usize, in_order: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
