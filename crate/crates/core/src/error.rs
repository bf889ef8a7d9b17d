use thiserror::Error;

use crate::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: Box<Rational>, hi: Box<Rational> },

    #[error("target {target} exceeds the remaining value {remainder}")]
    TargetExceedsRemainder {
        target: Box<Rational>,
        remainder: Box<Rational>,
    },

    #[error("malformed linear system: {0}")]
    MalformedSystem(String),

    #[error("lexicographic minimization of variable {variable} is unbounded below")]
    UnboundedLexMin { variable: usize },

    #[error("sub-cake is empty")]
    EmptySubcake,

    #[error("invalid split request: {0}")]
    InvalidSplitRequest(String),

    #[error("no consensus split found (enumeration exhausted)")]
    NoSplitFound,

    #[error("enumeration needs {required} systems, budget is {cap}")]
    BudgetExceeded { required: u128, cap: u64 },

    #[error("piece is not a single connected interval ({intervals} intervals)")]
    PieceNotConnected { intervals: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parse error: {0}")]
    Parse(String),
}
