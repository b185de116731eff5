use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry: {0}")]
    Geometry(String),

    #[error("{quantity} = {value} outside of [{min}, {max}]")]
    Domain {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("material: {0}")]
    Material(String),

    #[error("config: {0}")]
    Config(String),

    #[error("mesh: {0}")]
    Mesh(String),

    #[error("assembly: {0}")]
    Assembly(String),

    #[error("linear solver: {0}")]
    Solver(String),

    #[error("lens integration failed at r = {r:.4} cm: {reason}")]
    Integration { r: f64, reason: String },

    #[error("shooting: no sign change of T(R_lens) found; samples (sigma, F) = {samples:?}")]
    Shooting { samples: Vec<(f64, f64)> },

    #[error("coupling: {0}")]
    Coupling(String),

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end: 2 for bad input, 3 for
    /// numerical failures, 1 for anything environmental.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain { .. } | Error::Geometry(_) | Error::Material(_) => 2,
            Error::Io { .. } | Error::Csv(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
