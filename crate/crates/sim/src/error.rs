use std::path::PathBuf;

use afdm_core::AfdmError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Core(#[from] AfdmError),

    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, SimError>;
