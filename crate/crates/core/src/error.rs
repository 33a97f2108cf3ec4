use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the range where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent or missing configuration (step sizes, grid shapes, calibration).
    #[error("configuration error: {0}")]
    Config(String),

    /// A requested window or probe lies outside the available data.
    #[error("range error: {0}")]
    Range(String),

    #[error("fit did not converge after {iterations} iterations (residual rms {residual_rms:.6e})")]
    FitNotConverged { iterations: usize, residual_rms: f64 },

    /// The data cannot determine the model parameters, e.g. a constant trace.
    #[error("degenerate fit input: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
