use thiserror::Error;

use crate::group::EdgeLabel;

/// Errors raised by group arithmetic, graph queries, search and construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sign modulus m must be at least 1")]
    ZeroModulus,
    #[error("symbol count n must be at least 1")]
    ZeroLength,
    #[error("prefix index {index} out of range [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("label {label} at word position {position} is out of range for n = {n}")]
    WordIndex {
        position: usize,
        label: EdgeLabel,
        n: usize,
    },
    #[error("operands differ in shape: S({m1},{n1}) vs S({m2},{n2})")]
    ShapeMismatch {
        m1: u32,
        n1: usize,
        m2: u32,
        n2: usize,
    },
    #[error("rank {rank} out of range [0, {count})")]
    RankOutOfRange { rank: u64, count: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid generalized permutation: {0}")]
    InvalidPerm(String),
    #[error("graph has {count} vertices, above the cap of {cap}")]
    TooManyVertices { count: u128, cap: u64 },
    #[error("operation requires n >= 2")]
    NeedsTwoSymbols,
    #[error("operation requires an undirected graph")]
    NeedsUndirected,
    #[error("invalid witness: {0}")]
    Witness(String),
    #[error("cycle never leaves its copy")]
    CycleInsideCopy,
    #[error("no edge with prefix index {0} in cycle")]
    NoEdgeWithIndex(usize),
    #[error("({a}, {b}) is not an edge")]
    NotAnEdge { a: String, b: String },
    #[error("length {length} not admissible for UP({m},{n}): {reason}")]
    InadmissibleLength {
        m: u32,
        n: usize,
        length: usize,
        reason: String,
    },
    #[error("construction failed verification: {0}")]
    Construction(String),
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
