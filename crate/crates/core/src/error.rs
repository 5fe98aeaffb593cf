use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("rotation system is inconsistent: dart {0}->{1} has no twin")]
    InconsistentRotation(u32, u32),
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("Euler's formula violated (V={v}, E={e}, F={f}, components={c})")]
    NotPlanar { v: usize, e: usize, f: usize, c: usize },
    #[error("designated outer walk is not a traced face")]
    BadOuterFace,
    #[error("graph must be connected for this operation")]
    Disconnected,
    #[error("vertex {0} is not alive")]
    DeadVertex(u32),
    #[error("edge {0}-{1} is not alive")]
    DeadEdge(u32, u32),
    #[error("edge {0}-{1} already exists")]
    EdgeExists(u32, u32),
    #[error("vertices {0:?} do not form a cycle")]
    NotACycle([u32; 3]),
    #[error("invalid replace: {0}")]
    BadReplace(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("not a generalized near-triangulation")]
    NotGnt,
    #[error("graph is not critical")]
    NotCritical,
    #[error("graph is not 2-critical")]
    NotTwoCritical,
    #[error("graph is not an even wheel")]
    NotEvenWheel,
    #[error("graph is an even wheel")]
    IsEvenWheel,
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph has a degree-one vertex ({0})")]
    HasDegreeOneVertex(u32),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("input is not a triangulation: {0}")]
    NotTriangulation(String),
    #[error("bucket board inconsistent with graph: {0}")]
    InconsistentBoard(String),
    #[error("set is not a connected dominating set: {0}")]
    NotCds(String),
    #[error("instance too large for brute force (n={0}, limit={1})")]
    TooLarge(usize, usize),
    #[error("Z is not a subgraph with at least one edge")]
    NotSubgraph,
    #[error("subgraph is not planarizing (genus {0} after slicing)")]
    NotPlanarizing(usize),
    #[error("cannot triangulate hole while keeping the graph simple")]
    CannotTriangulateSimply,
    #[error("spanning tree root {0} is a leaf")]
    RootIsLeaf(u32),
    #[error("curve is not 2-proper good: {0}")]
    NotProperGood(String),
    #[error("layout failed: {0}")]
    LayoutFailed(String),
    #[error("io error: {0}")]
    IoError(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::IoError(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GraphError>;
