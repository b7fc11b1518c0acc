use thiserror::Error;

use crate::io::config::ConfigError;
use crate::kinetic::KineticError;
use crate::mesh::MeshError;
use crate::topography::TopographyError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Topography(#[from] TopographyError),
    #[error(transparent)]
    Kinetic(#[from] KineticError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("non-finite state in cell {cell} at t = {time}")]
    NonFinite { cell: usize, time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
