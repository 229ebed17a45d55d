use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("vertex index {index} out of range for order {order}")]
    VertexOutOfRange { index: usize, order: usize },

    #[error("mixed attribute variants in one graph ({0})")]
    MixedAttributes(&'static str),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("transformation maps two vertices onto target {0}")]
    DuplicateTarget(usize),

    #[error("transformation entry {value} out of range (target order {target_order})")]
    TargetOutOfRange { value: usize, target_order: usize },

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("attribute variant does not match the cost model: {0}")]
    AttributeMismatch(String),

    #[error("invalid cost model: {0}")]
    InvalidCost(String),

    #[error("non-finite cost at ({row}, {col})")]
    NonFiniteCost { row: usize, col: usize },

    #[error("assignment problem is malformed: {0}")]
    MalformedProblem(String),

    #[error("assignment problem has no feasible solution")]
    Infeasible,

    #[error("exact GED refused: order {order} exceeds cap {cap}")]
    ExactOrderCap { order: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty graph collection")]
    EmptyCollection,

    #[error("xml: {0}")]
    Xml(String),

    #[error("missing attribute `{name}` on {element}")]
    MissingAttribute { name: String, element: String },

    #[error("edge references unknown node id `{0}`")]
    DanglingEndpoint(String),

    #[error("cannot parse `{value}` as {expected}")]
    BadValue {
        value: String,
        expected: &'static str,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("in {}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported native format version `{0}`")]
    UnsupportedVersion(String),

    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },

    #[error("class `{class}` has {size} graphs, fewer than the requested sample of {sample}")]
    ClassTooSmall {
        class: String,
        size: usize,
        sample: usize,
    },

    #[error("degenerate train/test split: {0}")]
    DegenerateSplit(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_file(path: impl Into<PathBuf>, source: Error) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(source),
        }
    }
}
