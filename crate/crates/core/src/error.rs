use alloc::string::String;
use core::fmt;

/// Errors raised by the library's checked operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    EmptyRoster,
    DuplicateCandidate(String),
    UnknownCandidate(String),
    CandidateOutOfRange(usize),
    NotAPermutation { vote: usize },
    RosterMismatch,
    EmptySubset,
    InvalidPartition(&'static str),
    BlockNotConsecutive,
    CondorcetHasNoScore,
    LiteralOutOfRange { var: usize, vars: usize },
    InvalidSolution(&'static str),
    WrongRule(&'static str),
    WrongModel,
    CertificateMismatch(&'static str),
    NestingViolated { axis: usize },
    NotConcave,
    NotRegular,
    ParallelEdges,
    InvalidGraph(&'static str),
    InvalidRx3c(&'static str),
    UnsupportedParameter(&'static str),
    CapExceeded { needed: u128, cap: u128 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyRoster => write!(f, "election needs at least one candidate"),
            Error::DuplicateCandidate(c) => write!(f, "duplicate candidate `{c}`"),
            Error::UnknownCandidate(c) => write!(f, "unknown candidate `{c}`"),
            Error::CandidateOutOfRange(c) => write!(f, "candidate index {c} out of range"),
            Error::NotAPermutation { vote } => {
                write!(f, "vote {vote} does not rank every candidate exactly once")
            }
            Error::RosterMismatch => write!(f, "vote and axis are over different rosters"),
            Error::EmptySubset => write!(f, "candidate subset is empty"),
            Error::InvalidPartition(why) => write!(f, "invalid partition: {why}"),
            Error::BlockNotConsecutive => write!(f, "block is not consecutive on the axis"),
            Error::CondorcetHasNoScore => write!(f, "the Condorcet rule has no score"),
            Error::LiteralOutOfRange { var, vars } => {
                write!(f, "literal variable {var} out of range (have {vars})")
            }
            Error::InvalidSolution(why) => write!(f, "invalid solution: {why}"),
            Error::WrongRule(want) => write!(f, "this solver needs rule {want}"),
            Error::WrongModel => write!(f, "this solver supports the unique-winner model only"),
            Error::CertificateMismatch(why) => write!(f, "certificate mismatch: {why}"),
            Error::NestingViolated { axis } => {
                write!(f, "above-sets on axis {axis} do not form a chain")
            }
            Error::NotConcave => write!(f, "piecewise-linear function is not concave"),
            Error::NotRegular => write!(f, "graph is not 3-regular with equal sides"),
            Error::ParallelEdges => write!(f, "graph has parallel edges"),
            Error::InvalidGraph(why) => write!(f, "invalid graph: {why}"),
            Error::InvalidRx3c(why) => write!(f, "invalid RX3C instance: {why}"),
            Error::UnsupportedParameter(why) => write!(f, "unsupported parameter: {why}"),
            Error::CapExceeded { needed, cap } => {
                write!(f, "search needs {needed} subsets, above the cap of {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}
