use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot compose: codomain {left} does not match domain {right}")]
    Compose { left: String, right: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("square does not commute: {0}")]
    NotCommuting(String),

    #[error("morphism is not over the base: {0}")]
    NotOverBase(String),

    #[error("{construction} would materialize {size} elements (cap {cap})")]
    Capacity {
        construction: String,
        size: usize,
        cap: usize,
    },

    #[error("enumeration bound exceeded: {0}")]
    Bound(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid fixture: {0}")]
    Spec(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
