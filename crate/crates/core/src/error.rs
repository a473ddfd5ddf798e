use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("simplex {simplex:?} repeats vertex {vertex}")]
    DuplicateVertex { simplex: Vec<u32>, vertex: u32 },

    #[error("simplex {simplex:?} is not strictly increasing")]
    Unordered { simplex: Vec<u32> },

    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: u32, count: u32 },

    #[error("complex `{0}` is not connected")]
    Disconnected(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("unknown builtin space `{0}`")]
    UnknownSpace(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration of {estimated} cells exceeds the cell cap of {cap}")]
    CellCap { estimated: u128, cap: u64 },

    #[error("selected cells are not closed: level {level} cell {payload:?} {reason}")]
    NotClosed {
        level: usize,
        payload: Vec<u32>,
        reason: String,
    },

    #[error("simplicial identity violated at level {level}, cell {cell}: {identity}")]
    Identity {
        level: usize,
        cell: usize,
        identity: String,
    },

    #[error("map does not commute with {operator} at level {level}, cell {cell}")]
    NotSimplicial {
        level: usize,
        cell: usize,
        operator: String,
    },

    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    #[error("dimension bound violated: {count} nondegenerate cells at level {level} > {bound}")]
    DimensionBound {
        level: usize,
        bound: usize,
        count: usize,
    },

    #[error("boundary of boundary is nonzero in degree {0}")]
    BoundarySquare(usize),

    #[error("degree {degree} out of range (top {top})")]
    DegreeOutOfRange { degree: usize, top: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("unknown verification case `{0}`")]
    UnknownCase(String),

    #[error("empty subobject")]
    EmptySubobject,
}

pub type Result<T> = std::result::Result<T, Error>;
