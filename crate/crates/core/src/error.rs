use thiserror::Error;

use crate::schematic::{StateId, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit character {found:?} at position {position}")]
pub struct ParseBitsError {
    pub position: usize,
    pub found: char,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    Empty,
    /// Indices are zero-based positions in the input order.
    #[error("duplicate corpus strings at indices {first} and {second}")]
    Duplicate { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("no transition for input bit {position} at state {state}")]
    MissingTransition { state: StateId, position: usize },
    #[error("continue marker at input bit {position} (state {state}) is 0")]
    BadMarker { state: StateId, position: usize },
    #[error("input exhausted at state {state}, which has no end transition")]
    InputExhausted { state: StateId },
    #[error("input bits remain from position {position} after reaching final state {state}")]
    TrailingInput { state: StateId, position: usize },
    #[error("schematic did not halt; it is not acyclic")]
    NoHalt,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("string rejected at bit {position} (state {state}): {reason}")]
pub struct EncodeError {
    pub position: usize,
    pub state: StateId,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("start state outputs the other bit")]
    StartMismatch,
    #[error("no successor outputs the required bit")]
    NoMatchingTransition,
    #[error("path ends without an end-of-input transition")]
    NoEndTransition,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown state id {0}")]
    UnknownState(StateId),
    #[error("cycle detected through state {0}")]
    Cycle(StateId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("unsupported header {0:?}")]
    Version(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schematic fails validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame truncated")]
    Truncated,
    #[error("bit count does not fit in 64 bits")]
    Overflow,
    #[error("nonzero padding bits in final byte")]
    NonzeroPadding,
    #[error("{0} trailing bytes after frame")]
    TrailingBytes(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusReadError {
    #[error("input contains no corpus items")]
    Empty,
    /// One-based line numbers (bitlines) or file positions (bytes mode).
    #[error("duplicate item on lines {first} and {second}")]
    Duplicate { first: usize, second: usize },
    #[error("line {line}, column {column}: invalid character {found:?}")]
    BadChar { line: usize, column: usize, found: char },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("trace path index {0} out of range")]
    PathOutOfRange(usize),
    #[error("instance has {nodes} nodes, above the brute-force cap of {cap}")]
    CapExceeded { nodes: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instance is invalid: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("bandwidth ratio must exceed 1, got {0}")]
    BandwidthRatio(f64),
    #[error("playlist entry {position} names item {index}, but the corpus has {n} items")]
    PlaylistIndex { position: usize, index: usize, n: usize },
    #[error(transparent)]
    Encode(#[from] EncodeError),
}
