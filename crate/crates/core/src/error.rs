use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WarError {
    #[error("deck size {0} is out of range (expected 2..={max})", max = crate::rules::MAX_DECK)]
    DeckSize(usize),
    #[error("deck size {0} must be even for equal-split deals")]
    OddDeck(usize),
    #[error("cards {0} and {1} tie; distinct values are required")]
    Tie(u8, u8),
    #[error("card {card} is outside the deck 1..={n}")]
    CardOutOfRange { card: u8, n: u8 },
    #[error("malformed state: {0}")]
    MalformedState(String),
    #[error("operation requires a non-final state")]
    FinalState,
    #[error("rank {rank} is out of range for n = {n} (state count {count})")]
    RankOutOfRange { rank: u64, n: usize, count: u64 },
    #[error("not an edge of the game graph: {0}")]
    NotAnEdge(String),
    #[error("invalid placement probabilities: {0}")]
    Probabilities(String),
    #[error("graph is not absorbing: {wandering} wandering states (e.g. {sample})")]
    NotAbsorbing { wandering: u64, sample: String },
    #[error("solver did not converge within {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: u64, residual: f64 },
    #[error("state {0} is wandering; no final state is reachable")]
    Wandering(String),
    #[error("edge filter {a} is not a subgraph of {b}")]
    FilterNotSubset { a: String, b: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = WarError> = std::result::Result<T, E>;
