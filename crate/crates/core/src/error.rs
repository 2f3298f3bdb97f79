use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: expected {expected}, found {found}")]
    ShapeMismatch { op: &'static str, expected: String, found: String },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("{op} requires a nonzero weight vector `{which}`")]
    ZeroWeight { op: &'static str, which: &'static str },

    #[error("target component {name}[{index}] = {value} is negative")]
    NegativeTarget { name: &'static str, index: usize, value: f64 },

    #[error("box entry ({row}, {col}) has empty interval [{lower}, {upper}]")]
    EmptyInterval { row: usize, col: usize, lower: f64, upper: f64 },

    #[error("solver called with {requested:?} but config selects {configured:?}")]
    AlgorithmMismatch { requested: crate::solvers::Algorithm, configured: crate::solvers::Algorithm },

    #[error("singular KKT system (pivot {pivot:e} at column {column})")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("oracle limited to m*n <= {limit}, got {size}")]
    TooLarge { size: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape_err(op: &'static str, expected: (usize, usize), found: (usize, usize)) -> Error {
    Error::ShapeMismatch {
        op,
        expected: format!("{}x{}", expected.0, expected.1),
        found: format!("{}x{}", found.0, found.1),
    }
}

pub(crate) fn len_err(op: &'static str, expected: usize, found: usize) -> Error {
    Error::ShapeMismatch { op, expected: format!("length {expected}"), found: format!("length {found}") }
}
