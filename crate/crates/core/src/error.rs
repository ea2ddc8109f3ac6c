use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested configuration (rule size, family name, node count) is unsupported.
    #[error("configuration error: {0}")]
    Config(String),

    /// A coefficient expansion was cut off before its tail became negligible.
    #[error("truncation error: tail weight {tail:.3e} exceeds {bound:.3e} of the total at n_max = {n_max}")]
    Truncation { n_max: usize, tail: f64, bound: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
