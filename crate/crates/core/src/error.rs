use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a numeric routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// A system or scheme parameter violates one of its structural constraints.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Every measured power in a sweep was zero.
    #[error("no signal: all received powers are zero")]
    NoSignal,

    #[error("singular pilot Gram matrix")]
    SingularPilots,

    #[error("scenario parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("trial {trial} of scheme `{scheme}` at sweep value {sweep_value} failed: {source}")]
    Trial {
        scheme: String,
        sweep_value: f64,
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
