use thiserror::Error;

/// Errors produced by the imset library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImsetError {
    #[error("ground set must have between 1 and {max} variables, got {n}")]
    GroundSetSize { n: usize, max: usize },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("triplet sets are not pairwise disjoint")]
    NotDisjoint,

    #[error("operands live on different ground sets")]
    GroundSetMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("integer overflow in imset arithmetic")]
    Overflow,

    #[error("{0}")]
    Precondition(String),

    #[error("function is not supermodular (violated at elementary triplet {triplet})")]
    NotSupermodular { triplet: String },

    #[error("function is not modular")]
    NotModular,

    #[error("{constructor}: hypothesis violated at {index}: {reason}")]
    Hypothesis {
        constructor: &'static str,
        index: String,
        reason: String,
    },

    #[error("imset is not structural")]
    NotStructural,

    #[error("imset is not combinatorial")]
    NotCombinatorial,

    #[error("vector is not in the integer kernel of the configuration")]
    NotInKernel,

    #[error("cone generated by the given list is not pointed")]
    NotPointed,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("computation budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, ImsetError>;

impl ImsetError {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        ImsetError::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
