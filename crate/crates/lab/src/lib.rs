//! Configuration-driven sweeps over the driven Dicke model with CSV/JSON output.

pub mod config;
pub mod runner;
pub mod table;

pub use config::{Mode, Overrides, RunConfig};
pub use runner::{reproduce_figures, run, write_output, RunOutput};
pub use table::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => runner::EXIT_CONFIG,
            LabError::Io(_) => 1,
        }
    }
}
