use std::io;
use std::path::PathBuf;

use ribbon_core::{GraphError, MultiscaleError, NumericsError, OscillationError, PowerCountError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Scales(#[from] MultiscaleError),
    #[error(transparent)]
    Oscillation(#[from] OscillationError),
    #[error(transparent)]
    PowerCount(#[from] PowerCountError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{0}")]
    Usage(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("divergent nodes found")]
    Divergent,
}

impl CliError {
    /// 2 parse or missing input, 3 invalid graph, 4 attribution mismatch,
    /// 5 oracle mismatch, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Graph(e) => graph_code(e),
            CliError::Scales(MultiscaleError::Parse(_)) => 2,
            CliError::Scales(_) => 4,
            CliError::Oscillation(OscillationError::Graph(e)) => graph_code(e),
            CliError::Oscillation(
                OscillationError::Disconnected | OscillationError::InsertionVertices,
            ) => 3,
            CliError::Oscillation(_) => 1,
            CliError::PowerCount(PowerCountError::Graph(e)) => graph_code(e),
            CliError::PowerCount(_) => 1,
            CliError::Numerics(NumericsError::InvalidParams(_)) => 2,
            CliError::Numerics(NumericsError::Graph(e)) => graph_code(e),
            CliError::Numerics(NumericsError::UnsupportedGraph(_)) => 3,
            CliError::Numerics(_) => 1,
            CliError::OracleMismatch(_) => 5,
            CliError::Divergent => 1,
        }
    }
}

fn graph_code(e: &GraphError) -> i32 {
    match e {
        GraphError::Parse(_) => 2,
        _ => 3,
    }
}
