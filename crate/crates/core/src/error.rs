use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("reference error: {0}")]
    Reference(String),
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("node cap of {cap} exceeded")]
    NodeCap { cap: usize },
    #[error("unsupported tie-breaking mechanism: {0}")]
    UnsupportedMechanism(String),
    #[error("unsupported objective: {0}")]
    UnsupportedObjective(String),
    #[error("illegal bid {bid} for player {player} with budget {budget}")]
    IllegalBid { player: u8, bid: u32, budget: u32 },
    #[error("size limit of {limit} exceeded")]
    SizeLimit { limit: usize },
    #[error("strategy has no decision for configuration {0}")]
    MissingDecision(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
