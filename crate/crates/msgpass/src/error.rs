use thiserror::Error;

/// Identifies the processor a runtime error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessorId {
    Vertex(usize),
    Edge(usize),
}

impl std::fmt::Display for ProcessorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProcessorId::Vertex(v) => write!(f, "vertex {v}"),
            ProcessorId::Edge(e) => write!(f, "edge {e}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("memory budget violated at round {round}, {processor}: state uses {bits} bits, budget is {budget}")]
    MemoryBudget {
        round: usize,
        processor: ProcessorId,
        bits: usize,
        budget: usize,
    },

    #[error("simulation requires the unbounded state mode")]
    UnboundedRequired,

    #[error("graph is not a tree (connected and acyclic) as required")]
    NotATree,

    #[error("instance size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
