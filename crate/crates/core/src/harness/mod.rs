//! Seeded experiments: synthesis, splitting, training, evaluation and CSV
//! output.
//!
//! Every instance `i` of an experiment draws all of its randomness from
//! `derive_seed(master_seed, i)`, so instances are independent of each other
//! and of how many instances run or in which order.

mod config;
mod eval;
mod output;
mod run;

pub use config::{parse_plan, ExperimentConfig, Method, Task};
pub use eval::{accuracy, build_reverse_test, evaluate, split_dataset, FittedMethod, TestSet};
pub use output::{emit_results, read_detail_csv, read_summary_csv, summarize, DetailRow, SummaryRow, DETAIL_FILE, SUMMARY_FILE};
pub use run::{run_experiment, run_experiment_with_profile, run_plan, EvalReport, MethodReport};

use std::path::PathBuf;

use thiserror::Error;

use crate::baselines::BaselineError;
use crate::model::ModelError;
use crate::preflib::{ParseError, ProfileError};
use crate::synth::SynthError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("degenerate split: {train} training and {test} test groups")]
    DegenerateSplit { train: usize, test: usize },
    #[error("empty test set")]
    EmptyTestSet,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("instance {index}: {source}")]
    Instance { index: usize, source: Box<HarnessError> },
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }
}
