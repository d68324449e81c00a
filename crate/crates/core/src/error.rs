use thiserror::Error;

/// Errors raised by the toolkit. Every operation reports precondition
/// violations distinctly from "false"/"empty" answers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: Q(sqrt(-{left})) vs Q(sqrt(-{right}))")]
    FieldMismatch { left: u64, right: u64 },

    #[error("not a similitude: {0}")]
    NotSimilitude(String),

    #[error("prime {p} is {kind} in Q(sqrt(-{d}))")]
    NotSplit { p: u64, d: u64, kind: &'static str },

    #[error("numerical degeneracy: {0}")]
    Numerical(String),

    #[error("outside the convergence region: {0}")]
    Convergence(String),

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("lattice mismatch")]
    LatticeMismatch,

    #[error("missing local data: {0}")]
    Missing(String),

    #[error("enumeration budget exceeded: need {needed}, cap {cap}")]
    Budget { needed: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
