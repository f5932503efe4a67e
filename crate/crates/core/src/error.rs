use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("anchor point coincides with the corner (n,0)")]
    DegenerateAnchor,

    #[error("endpoints are not ordered: {0}")]
    InvalidOrder(String),

    #[error("chord is vertical")]
    DegenerateChord,

    #[error("region is not a convex polygon: {0}")]
    InvalidRegion(String),

    #[error("endpoint lies outside the region: {0}")]
    InvalidEndpoint(String),

    #[error("no path traps the required area {threshold} (max trappable area {max_trappable_area})")]
    Infeasible {
        threshold: f64,
        max_trappable_area: f64,
    },

    #[error("instance has {size} points, above the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("nothing to plot")]
    EmptyPlot,

    #[error("sweep interrupted after {completed} trials")]
    Interrupted { completed: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad user input rather than by the program.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Io { .. } | Error::Interrupted { .. } => false,
            Error::Csv(e) => !e.is_io_error(),
            _ => true,
        }
    }
}
