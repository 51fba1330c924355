use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Model parameters outside their admissible range.
    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Every prime in a modular configuration divided some denominator.
    #[error("no usable primes (skipped: {skipped:?})")]
    NoUsablePrimes { skipped: Vec<u64> },

    #[error("modular rank {modular} exceeds exact rank {exact}")]
    ModularDisagreement { modular: usize, exact: usize },

    #[error("not a Petri kernel element")]
    NotInKernel,

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("degree bound violated: {0}")]
    DegreeBound(String),

    #[error("extend qmax: {0}")]
    ExtendQmax(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A formula evaluator produced an index outside its declared range.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
}
