use std::time::Duration;

use thiserror::Error;

/// Errors produced by the enumeration and unfolding pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("face {face} references vertex {index}, but only {vertex_count} vertices exist")]
    VertexIndexOutOfRange {
        face: usize,
        index: usize,
        vertex_count: usize,
    },

    #[error("face {face} is degenerate: {reason}")]
    DegenerateFace { face: usize, reason: String },

    #[error("edge ({a}, {b}) is shared by {faces} faces; a closed shell needs exactly 2")]
    NonManifoldEdge { a: usize, b: usize, faces: usize },

    #[error("shell graph is disconnected")]
    Disconnected,

    #[error("{what} has {actual} elements, the supported maximum is {max}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        max: usize,
    },

    #[error("spanning-tree enumeration stopped after reaching the cap of {cap} trees")]
    CapExceeded { cap: u64, found: u64 },

    #[error(
        "search budget of {budget} nodes exhausted at interior size {interior_size} \
         ({nodes_visited} nodes visited, {found} cuts found so far)"
    )]
    BudgetExceeded {
        budget: u64,
        nodes_visited: u64,
        interior_size: usize,
        found: u64,
    },

    #[error("time limit of {limit:?} exceeded at interior size {interior_size}")]
    TimeLimitExceeded {
        limit: Duration,
        interior_size: usize,
    },

    #[error("invalid hole: {0}")]
    InvalidHole(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("polyhedron '{0}' carries no vertex coordinates")]
    MissingGeometry(String),

    #[error("layout has zero total area")]
    DegenerateArea,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("argument out of range: {0}")]
    Domain(String),

    #[error("every one of the {0} ranked nets self-overlaps")]
    FallbackExhausted(usize),

    #[error("unknown builtin '{name}'; available: {}", available.join(", "))]
    UnknownBuiltin {
        name: String,
        available: Vec<String>,
    },

    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        if err.is_io() {
            return Error::Io(err.into());
        }
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
