//! Random-instance benchmarks for the `seqflow` propagators: instance
//! generation, a text instance format, parallel solving and CSV output.

pub mod config;
pub mod instance;
pub mod run;

use std::path::Path;

use thiserror::Error;

pub use config::{BenchConfig, BenchKind, Cell, PropId};
pub use instance::{generate_instance, Instance, Line};
pub use run::{format_table, run_bench, run_cell, run_instance, write_csv, CellResult, RunRecord};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{origin}:{line}: {msg}")]
    Parse {
        origin: String,
        line: usize,
        msg: String,
    },
    #[error("solution of instance {index} in cell n={n} k={k} delta={delta} fails re-validation")]
    InvalidSolution {
        n: usize,
        k: usize,
        delta: usize,
        index: usize,
    },
}

impl BenchError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn csv(path: &Path, source: csv::Error) -> Self {
        BenchError::Csv {
            path: path.display().to_string(),
            source,
        }
    }
}
