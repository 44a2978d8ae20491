//! Benchmark harness: runs seed selectors over dataset × fraction grids and
//! writes LIE, FIS and execution-time tables.

pub mod config;
pub mod runner;
pub mod tables;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{seed_count, DatasetSpec, ExperimentConfig, Selector};
pub use runner::{read_results, run_experiment, ResultRow};
pub use tables::{emit_tables, write_manifest, EmittedTables};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
