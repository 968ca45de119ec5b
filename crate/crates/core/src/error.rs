use std::path::PathBuf;

use crate::graph::VertexSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate vertex {0} in vertex set")]
    DuplicateVertex(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("json error at line {line}, column {column} (byte offset {offset}): {message}")]
    Json {
        line: usize,
        column: usize,
        offset: usize,
        message: String,
    },

    #[error("layer {layer}: {message}")]
    DimensionChain { layer: usize, message: String },

    #[error("layer {layer}: non-finite value in {field}[{row}][{col}]")]
    NonFiniteWeight {
        layer: usize,
        field: &'static str,
        row: usize,
        col: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertex set does not dominate the graph")]
    NotDominating,

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded {
        /// Best dominating set found so far; not proven optimal.
        incumbent: Option<VertexSet>,
        nodes: u64,
    },

    #[error("graph has {n} vertices; brute force is limited to {max}")]
    GraphTooLarge { n: usize, max: usize },

    #[error("gcn-cycling mode requires probability maps")]
    MissingMaps,

    #[error("instance {instance}: {message}")]
    InvalidInstance { instance: String, message: String },

    #[error("dataset incomplete: {accepted} of {requested} instances labeled within budget")]
    DatasetIncomplete {
        accepted: usize,
        requested: usize,
        /// Manifest of the instances that were labeled.
        manifest: Box<crate::dataset::DatasetManifest>,
    },

    /// The message already includes the cause, so it is not exposed as a source.
    #[error("{path}: {cause}")]
    File { path: PathBuf, cause: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn from_json(text: &str, err: serde_json::Error) -> Self {
        let line = err.line();
        let column = err.column();
        Error::Json {
            line,
            column,
            offset: byte_offset(text, line, column),
            message: err.to_string(),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            cause: Box::new(self),
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return offset + column.min(l.len());
        }
        offset += l.len();
    }
    text.len()
}
