use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("point {0} repeated")]
    RepeatedPoint(usize),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("{what} cap exceeded: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("element {0} is not in the ambient group")]
    NotInAmbient(String),

    #[error("subgroups belong to different ambient groups")]
    AmbientMismatch,

    #[error("{0} is not a subgroup of {1}")]
    NotContained(String, String),

    #[error("subgroup {0} is not normal")]
    NotNormal(String),

    #[error("group {0} is not nilpotent")]
    NotNilpotent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed graph JSON: {0}")]
    GraphFormat(String),

    #[error("corrupt cache file {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for resource limits: caps and I/O.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::Io { .. })
    }

    /// True for errors caused by malformed user input.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::PointOutOfRange { .. }
                | Error::RepeatedPoint(_)
                | Error::DegreeMismatch { .. }
                | Error::UnknownVertex(_)
                | Error::Precondition(_)
                | Error::GraphFormat(_)
                | Error::Json(_)
        )
    }
}
