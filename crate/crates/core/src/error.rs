use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("density {value:.3e} below vacuum threshold {rho_min:.1e} ({context})")]
    Vacuum { value: f64, rho_min: f64, context: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("mollifier scale {eps} is unusable: {reason}")]
    Mollifier { eps: f64, reason: String },

    #[error("test function support violation: {0}")]
    Support(String),

    #[error("quadrature needs at least 3 samples, got {0}")]
    TooFewSamples(usize),

    #[error("structure table is degenerate: {0}")]
    Degenerate(String),

    #[error("simulation aborted at t = {time}: {reason}")]
    Aborted { time: f64, reason: String },

    #[error("snapshot format error in {path:?}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("config error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("i/o error on {path:?}: {source}")]
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

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
