use std::path::PathBuf;

use thiserror::Error;

use crate::geomgraph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("unknown node id {id} (topology has {n} nodes)")]
    NotFound { id: NodeId, n: usize },

    #[error("parse error in {context}: {reason}")]
    Parse { context: String, reason: String },

    #[error("head set does not dominate the topology; uncovered nodes: {uncovered:?}")]
    NotDominating { uncovered: Vec<NodeId> },

    #[error("contract violation: {0}")]
    Contract(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("refusing exhaustive search on {n} nodes (node limit is {limit})")]
    NodeLimit { n: usize, limit: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
