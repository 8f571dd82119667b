//! Library side of the command-line front end: configuration, checkpoint
//! logs, output rendering and the sharded campaign driver. The binary in
//! `main.rs` is a thin dispatcher over these modules, which keeps every
//! parser reachable from fuzz targets and integration tests.

pub mod campaign;
pub mod checkpoint;
pub mod config;
pub mod constants;
pub mod magnitude;
pub mod output;

/// Errors surfaced to the binary, split by exit-code class.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Configuration, usage, capacity or I/O problem: exit code 2.
    #[error("{0}")]
    Config(String),

    /// Library-level error treated as configuration/capacity: exit code 2.
    #[error(transparent)]
    Core(#[from] sqsf::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = Result<T, CliError>;
