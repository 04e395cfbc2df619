use std::path::PathBuf;

use thiserror::Error;

use crate::params::Node;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("node {0} has no SIC stage for this signal")]
    NoSicStage(Node),

    #[error("unknown node identifier `{0}`")]
    UnknownNode(String),

    #[error("{func}: argument {arg} outside domain ({why})")]
    Domain {
        func: &'static str,
        arg: f64,
        why: &'static str,
    },

    #[error("ideal-mode evaluation requires kappa = 0 and sigma_e2 = 0 on every link")]
    NotIdeal,

    #[error("{0}")]
    InvalidInput(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
