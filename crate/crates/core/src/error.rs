use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("geometry violation: {0}")]
    Geometry(String),

    #[error("{function}({order}, {x}) overflows f64")]
    Overflow { function: &'static str, order: i32, x: f64 },

    #[error("{function}({order}, {x}) underflows f64")]
    Underflow { function: &'static str, order: i32, x: f64 },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: i32, max: i32 },

    #[error("wavenumber mismatch: mode expects k = {expected}, data carries k = {found}")]
    WavenumberMismatch { expected: f64, found: f64 },

    #[error("missing coefficient for mode ({l1}, {l2})")]
    MissingCoefficient { l1: i32, l2: i32 },

    #[error("missing measurement data for k = {0}")]
    MissingData(f64),

    #[error("reference field is identically zero")]
    ZeroDenominator,

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("schema mismatch in {path}: {msg}")]
    Schema { path: PathBuf, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Short machine-readable tag, used in the CLI's JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Geometry(_) => "geometry",
            Error::Overflow { .. } => "overflow",
            Error::Underflow { .. } => "underflow",
            Error::OrderTooLarge { .. } => "order_too_large",
            Error::WavenumberMismatch { .. } => "wavenumber_mismatch",
            Error::MissingCoefficient { .. } => "missing_coefficient",
            Error::MissingData(_) => "missing_data",
            Error::ZeroDenominator => "zero_denominator",
            Error::Parse { .. } => "parse",
            Error::Schema { .. } => "schema",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}
