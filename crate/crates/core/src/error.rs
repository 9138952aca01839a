use thiserror::Error;

use crate::ext::ExtNat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow adding {0} and {1}")]
    Overflow(u64, u64),

    #[error("potential has {actual} entries but the frame has {expected} worlds")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("S1 violated: min potential is {0}")]
    NotNormalized(ExtNat),

    #[error("every entry is infinite; no world is possible")]
    AllInfinite,

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("empty frame")]
    EmptyFrame,

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("world `{0}` is not covered by the grouping")]
    UngroupedWorld(String),

    #[error("cannot condition on an event disbelieved with certainty")]
    ConditionOnDisbelievedCertainty,

    #[error("frames differ")]
    FrameMismatch,

    #[error("unknown prize `{0}`")]
    UnknownPrize(String),

    #[error("a prize set needs at least two prizes, got {0}")]
    TooFewPrizes(usize),

    #[error("NotNormalized: min delta is {0}")]
    NodeNotNormalized(ExtNat),

    #[error("lottery node has no branches")]
    EmptyBranches,

    #[error("children of a node are built over different prize sets")]
    PrizeSetMismatch,

    #[error("prize `{0}` has no assessment")]
    UnassessedPrize(String),

    #[error("assessment: {0}")]
    InvalidAssessment(String),

    #[error("({0}, {1}) is not in B0: min of the pair must be 0")]
    NotInB0(ExtNat, ExtNat),

    #[error("empty list")]
    EmptyList,

    #[error("unknown act `{0}`")]
    UnknownAct(String),

    #[error("decision problem: {0}")]
    InvalidProblem(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),
}
