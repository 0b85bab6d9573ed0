use std::path::PathBuf;

use thiserror::Error;
use votegame_core::ModelError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}{message}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse { path: Option<PathBuf>, message: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
