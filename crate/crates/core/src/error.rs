use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid distribution{}: {reason}", context_suffix(.context))]
    InvalidDistribution {
        context: Option<String>,
        reason: String,
    },

    #[error("enumeration too large: {what} has size {size}, cap is {cap}")]
    EnumerationTooLarge {
        what: String,
        size: usize,
        cap: usize,
    },

    #[error("cryptogram `{0}` has probability zero; posterior is undefined")]
    ZeroProbabilityCryptogram(String),

    #[error("invalid cryptosystem: {}", .0.join("; "))]
    InvalidCryptosystem(Vec<String>),

    #[error("not applicable: channel is {rows}x{cols}, a square channel is required")]
    NotSquare { rows: usize, cols: usize },

    #[error("not doubly stochastic: row `{row}` sums to {sum}")]
    NotDoublyStochastic { row: String, sum: Rational },

    #[error("invalid gap parameters: {0}")]
    InvalidGapParams(String),

    #[error("invalid binary joint: {0}")]
    InvalidBinaryJoint(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 1,
            Error::EnumerationTooLarge { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn invalid_dist(reason: impl Into<String>) -> Self {
        Error::InvalidDistribution {
            context: None,
            reason: reason.into(),
        }
    }

    /// Attach a location (column, field) to a distribution error.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::InvalidDistribution { reason, .. } => Error::InvalidDistribution {
                context: Some(ctx.into()),
                reason,
            },
            other => other,
        }
    }
}
