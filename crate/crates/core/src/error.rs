use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("lattice has {available} paths, {required} required")]
    InsufficientPaths { required: usize, available: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("{func} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        func: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("maximizer {argmax} lies on the boundary of the window [{lo}, {hi}]")]
    WindowMiss { argmax: f64, lo: f64, hi: f64 },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn param(name: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
