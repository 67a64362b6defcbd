//! Cell-centered finite volume schemes on polyhedral meshes, with the
//! discrete operators needed to check their weak consistency: gradients on
//! dual volumes, translation seminorms, and the summation-by-parts
//! decomposition of the scheme tested against smooth functions.

pub mod cli;
pub mod config;
pub mod consistency;
pub mod data;
pub mod flux;
pub mod mesh;
pub mod operators;
pub mod quadrature;
pub mod solver;
pub mod study;
pub mod translations;

use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Mesh(#[from] mesh::MeshError),
    #[error(transparent)]
    Operator(#[from] operators::OperatorError),
    #[error(transparent)]
    Translation(#[from] translations::TranslationError),
    #[error(transparent)]
    Flux(#[from] flux::FluxError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error(transparent)]
    Consistency(#[from] consistency::ConsistencyError),
    /// A study finished but one of its bounds failed.
    #[error("{0}")]
    Breach(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_owned(),
            source,
        }
    }

    /// `1` for I/O and internal failures, `2` for invalid input or a breached
    /// invariant.
    pub fn exit_code(&self) -> i32 {
        use consistency::ConsistencyError as C;
        use solver::SolverError as S;
        match self {
            Self::Io { .. } | Self::Internal(_) => 1,
            Self::Mesh(mesh::MeshError::Io(_)) | Self::Solver(S::Io(_)) => 1,
            Self::Consistency(C::Solver(S::Io(_)) | C::Mesh(mesh::MeshError::Io(_))) => 1,
            _ => 2,
        }
    }
}
