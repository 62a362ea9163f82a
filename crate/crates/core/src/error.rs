use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("edge ({tail}, {head}) must satisfy tail < head within vertices {first}..={last}")]
    InvalidEdge {
        tail: Vertex,
        head: Vertex,
        first: Vertex,
        last: Vertex,
    },
    #[error("graph must have at least one vertex")]
    EmptyVertexSet,
    #[error("multiplicity at position {position} must be positive, got {value}")]
    NonPositiveMultiplicity { position: usize, value: i64 },
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("netflow entries sum to {0}, not zero")]
    NetflowNotBalanced(i64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("precondition failed at vertex {vertex}: {reason}")]
    Precondition { vertex: Vertex, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("reduction tree exceeded the node cap of {cap}")]
    NodeCapExceeded { cap: usize },
    #[error("edge {edge} is not usable in this reduction: {reason}")]
    BadReductionEdge { edge: usize, reason: String },
    #[error("noncrossing tree shape {left}x{right} does not match reduction sets {expected_left}x{expected_right}")]
    TreeShapeMismatch {
        left: usize,
        right: usize,
        expected_left: usize,
        expected_right: usize,
    },
    #[error("provenance sets overlap on root edge {0}")]
    ProvenanceOverlap(usize),
    #[error("leaf {leaf} has unexpected shape: {reason}")]
    UnexpectedLeaf { leaf: String, reason: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
