use std::path::PathBuf;

/// Everything the harness can fail with.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// Config file missing or unreadable.
    #[error("cannot read {path}: {source}")]
    Read {
        /// File that failed.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Config text does not parse.
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    /// Parsed config violates an invariant.
    #[error("invalid config: {0}")]
    Invalid(String),
    /// Simulation core rejected a parameter.
    #[error("simulation: {0}")]
    Core(#[from] stage_ctl_core::Error),
    /// Output could not be written.
    #[error("cannot write {path}: {source}")]
    Write {
        /// File or directory that failed.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// CSV encoding or decoding failed.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// Metric over an empty window.
    #[error("empty metric window (t >= {0} s)")]
    EmptyWindow(f64),
    /// Every grid point faulted.
    #[error("no grid point completed without a fault")]
    NoViableConfig,
}

/// Harness result.
pub type Result<T> = std::result::Result<T, BenchError>;
