use thiserror::Error;

/// Errors shared across the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order of the root of unity must be at least 2, got {0}")]
    BadOrder(u64),
    #[error("bad prime field parameters: {0}")]
    BadPrime(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rewrite step cap of {0} exceeded (suspected non-terminating rule set)")]
    StepCapExceeded(u64),
    #[error("bad presentation parameters: {0}")]
    BadParams(String),
    #[error("rule for `{0}` is missing or its swap coefficient is not a power of q")]
    NotOreTower(String),
    #[error("element is not q-normal: no exponent works for generator `{0}`")]
    NotQNormal(String),
    #[error("image cardinality {0} is not a perfect square")]
    NotAPerfectSquare(String),
    #[error("parameter `{0}` must be nonzero")]
    ZeroParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not invariant under the algebra action")]
    NotInvariant,
    #[error("radical computation needs characteristic 0 or p > {0}")]
    BadCharacteristic(usize),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
