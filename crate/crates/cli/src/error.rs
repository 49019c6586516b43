use std::path::PathBuf;

use rp2hunt_core::admissibility::AdmissibilityError;
use rp2hunt_core::builder::BuildError;
use rp2hunt_core::generators::GeneratorError;
use rp2hunt_core::hypergraph::HypergraphError;
use rp2hunt_core::io::ParseError;
use thiserror::Error;

/// Everything that ends a command with exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: {source}")]
    Parse {
        origin: String,
        #[source]
        source: ParseError,
    },
    #[error("{origin}: line {line}: {message}")]
    Config { origin: String, line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}
