use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: vertex {unreachable} cannot be reached from vertex {from}")]
    Disconnected { from: usize, unreachable: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("layer set must not be empty")]
    EmptyLayerSet,
    #[error("layer {layer} outside the valid range 1..={max}")]
    LayerOutOfRange { layer: usize, max: usize },
    #[error("vertex budget exceeded: requested graph has {requested} vertices, budget is {budget}")]
    VertexBudgetExceeded { requested: u64, budget: u64 },
    #[error("alphabet size q={got} too small, need q >= {min}")]
    AlphabetTooSmall { got: u32, min: u32 },
    #[error("word length m={0} must be at least 1")]
    WordLengthTooSmall(u32),
    #[error("no closed-form packing chromatic number for q={q}, m={m}")]
    ClosedFormUnavailable { q: u32, m: u32 },
    #[error("warm-start set is not stable: vertices {u} and {v} are adjacent")]
    InvalidInitialSet { u: usize, v: usize },
    #[error("layered set contains star members; a coloring needs plain vertices only")]
    StarMembersPresent,
    #[error("upper-bound witness rejected: {reason}")]
    InvalidUpperBound { reason: String },
    #[error("graph too large for exhaustive search: {n} > {max} vertices")]
    TooLarge { n: usize, max: usize },
    #[error("clique cover rejected for layer {layer}: {reason}")]
    InvalidCover { layer: usize, reason: String },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("solve budget exhausted before a required exact answer was reached")]
    BudgetExhausted,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
