use thiserror::Error;

/// Errors raised while building or validating hypergraphs, pinnings and activities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("edge {edge}: vertex {vertex} is out of range for {num_vertices} vertices")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("edge {edge}: vertex {vertex} appears more than once")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("pinned vertex {vertex} is out of range for {num_vertices} vertices")]
    PinOutOfRange { vertex: usize, num_vertices: usize },
    #[error("pinning occupies both {first} and {second} inside edge {edge}")]
    InvalidPinning {
        edge: usize,
        first: usize,
        second: usize,
    },
    #[error("activity must be positive and finite, got {0}")]
    InvalidActivity(f64),
    #[error("activity override for vertex {vertex} must be finite and nonnegative, got {value}")]
    InvalidOverride { vertex: usize, value: f64 },
    #[error("activity vector covers {got} vertices, hypergraph has {expected}")]
    ActivityLength { got: usize, expected: usize },
    #[error("type map has {got} entries, expected {expected}")]
    TypeLength { got: usize, expected: usize },
    #[error("vertex {0} is out of range")]
    NoSuchVertex(usize),
    #[error("edge {edge} has size {size}; gadget reduction needs a graph")]
    NotAGraph { edge: usize, size: usize },
    #[error("gadget parameter k must be at least 1")]
    BadGadgetParameter,
    #[error("instance has {num_vertices} vertices, above the enumeration cap of {cap}")]
    TooLarge { num_vertices: usize, cap: usize },
    #[error("tree expansion exceeded {0} nodes")]
    ExpansionLimit(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("edge ordering for vertex {vertex} is not a permutation of its incident edges")]
    BadOrdering { vertex: usize },
}

/// Errors from the text formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            message: message.into(),
        }
    }
}
