use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no edges survive ingestion")]
    EmptyGraph,

    #[error("label `{0}` maps to more than one vertex")]
    LabelCollision(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("tree does not span the graph: {0}")]
    TreeMismatch(String),

    #[error("edge {0} belongs to the spanning tree")]
    EdgeInTree(usize),

    #[error("state or accumulator belongs to a different graph: {0}")]
    GraphMismatch(String),

    #[error("no trees have been accumulated")]
    EmptyAccumulator,

    #[error("no tie-break vertex was fixed before accumulation")]
    NoTieBreak,

    #[error("vertex {0} has degree zero")]
    ZeroDegree(usize),

    #[error("graph has {count} spanning trees, above the enumeration cap of {cap}")]
    TooManyTrees { count: String, cap: u64 },

    #[error("{what} is {size}, above the enumeration cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oracle routes disagree: {0}")]
    OracleMismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by input that could not be parsed or that
    /// produced no usable graph.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::EmptyGraph)
    }

    /// True for errors raised by enumeration or size guards.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::TooManyTrees { .. } | Error::TooLarge { .. })
    }
}
