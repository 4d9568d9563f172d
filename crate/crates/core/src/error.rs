use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. `Invalid*` variants indicate bad input (CLI exit
/// code 1); `Internal` indicates a broken invariant that should be impossible
/// for validated inputs (CLI exit code 2).
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("rotation table has {got} rows but n = {n}")]
    RotationLength { n: usize, got: usize },

    #[error("triangulation must have at least 4 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("vertex {v} lists neighbor {w} out of range")]
    NeighborOutOfRange { v: usize, w: usize },

    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),

    #[error("parallel edge {u}-{v} (neighbor listed twice)")]
    ParallelEdge { u: usize, v: usize },

    #[error("adjacency not symmetric: {u} lists {v} but not vice versa")]
    NotSymmetric { u: usize, v: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("rotation system is not a sphere embedding (V-E+F = {0}, expected 2)")]
    NotPlanar(i64),

    #[error("non-triangular face {0:?}")]
    NonTriangularFace(Vec<usize>),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("curve construction failed: {0}")]
    CurveConstruction(String),

    #[error("surgery failed: {0}")]
    Surgery(String),

    #[error("internal invariant violation: {0}")]
    Internal(String),
}

impl Error {
    /// CLI exit code classification: 1 for bad input, 2 for internal errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) | Error::Surgery(_) | Error::CurveConstruction(_) => 2,
            _ => 1,
        }
    }
}
