use thiserror::Error;

/// Errors produced by construction and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet needs at least two symbols, got {0}")]
    AlphabetTooSmall(usize),
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),
    #[error("expected {expected} probabilities, got {got}")]
    ProbabilityCount { expected: usize, got: usize },
    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("symbol {0:?} not in alphabet")]
    SymbolNotInAlphabet(char),
    #[error("pattern must not be empty")]
    EmptyPattern,
    #[error("empty word has no border")]
    EmptyWord,
    #[error("predictor width {0} is not supported (expected 1 or 2 bits)")]
    BadPredictorWidth(u8),
    #[error("predictor value {value} does not fit in {bits} bits")]
    BadPredictorValue { bits: u8, value: u8 },
    #[error("invalid trace character {0:?} (expected 'T' or 'N')")]
    BadTraceChar(char),
    #[error("state {state} has outgoing probability {sum}, expected 1")]
    RowSumNotOne { state: usize, sum: f64 },
    #[error("invalid edge from state {state}: {reason}")]
    BadEdge { state: usize, reason: String },
    #[error("chain has {0} terminal strongly connected components, expected exactly one")]
    MultipleTerminalComponents(usize),
    #[error("chain is not a single strongly connected component")]
    NotStronglyConnected,
    #[error("no self-loop in the chain to witness aperiodicity")]
    NoAperiodicityWitness,
    #[error("stationary solve failed: {0}")]
    StationarySolve(String),
    #[error("text length must be at least 1")]
    EmptyText,
    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
