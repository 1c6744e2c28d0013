//! Error type shared across the crate, with process exit codes for the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument to a physics routine (negative length, zero mass, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration or input-file problem.
    #[error("config error: {0}")]
    Config(String),

    /// Dimensionally incompatible unit conversion.
    #[error("unit error: cannot convert {from} to {to}")]
    Unit { from: String, to: String },

    /// A numerical procedure failed to reach its accuracy target.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// Resource limits exceeded (mesh too large, ...).
    #[error("resource error: {0}")]
    Resource(String),

    /// Lennard-Jones / Casimir-Polder matching failed: the C3 used for the
    /// short-range model is inconsistent with the tabulated potential.
    #[error("matching error: {0}")]
    Matching(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code contract: 0 success, 2 config, 3 numerical accuracy, 4 resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Config(_) | Error::Unit { .. } | Error::Matching(_) => 2,
            Error::Accuracy(_) => 3,
            Error::Resource(_) | Error::Io(_) => 4,
        }
    }

    /// Machine-readable kind tag used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::Unit { .. } => "unit",
            Error::Accuracy(_) => "accuracy",
            Error::Resource(_) => "resource",
            Error::Matching(_) => "matching",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
