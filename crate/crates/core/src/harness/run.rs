use std::borrow::Cow;
use std::collections::HashMap;
use std::path::PathBuf;

use rayon::prelude::*;

use super::eval::{build_reverse_test, evaluate, split_dataset, TestSet};
use super::output::mean_std;
use super::{ExperimentConfig, HarnessError, Method, Task};
use crate::model::ModelConfig;
use crate::preflib::{parse_preference_file, PreferenceProfile};
use crate::rng::{derive_seed, stream_rng};
use crate::social_choice::DecisionRule;
use crate::synth::{synthesize, SynthConfig, SynthMethod};

const SAMPLE_STREAM: u64 = 0;
const SYNTH_STREAM: u64 = 1;
const SPLIT_STREAM: u64 = 2;
const MODEL_STREAM: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct MethodReport {
    pub method: Method,
    /// One accuracy per instance, in instance order.
    pub accuracies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over instances.
    pub std: f64,
}

/// Results of every instance of one experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub dataset: String,
    pub task: Task,
    pub rule: DecisionRule,
    pub synth_method: SynthMethod,
    /// κ for KPG, l for RSG and RDG.
    pub size_param: usize,
    pub methods: Vec<MethodReport>,
}

impl EvalReport {
    pub fn method(&self, method: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.method == method)
    }

    /// Mean accuracy of `method`, or NaN when it was not run.
    pub fn mean(&self, method: Method) -> f64 {
        self.method(method).map_or(f64::NAN, |r| r.mean)
    }
}

fn read_profile(path: &PathBuf) -> Result<PreferenceProfile, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_preference_file(&text).map_err(|source| HarnessError::Parse { path: path.clone(), source })
}

fn run_instance(config: &ExperimentConfig, profile: &PreferenceProfile, index: usize) -> Result<Vec<f64>, HarnessError> {
    let seed = derive_seed(config.seed, index as u64);
    let profile: Cow<PreferenceProfile> = match config.n_users {
        Some(n) if n < profile.num_voters() => Cow::Owned(profile.sample_users(n, &mut stream_rng(seed, SAMPLE_STREAM))?),
        Some(n) if n > profile.num_voters() => {
            return Err(HarnessError::Invalid(format!("n_users {n} exceeds the {} voters", profile.num_voters())))
        }
        _ => Cow::Borrowed(profile),
    };
    let synth = SynthConfig { seed: derive_seed(seed, SYNTH_STREAM), ..config.synth.clone() };
    let dataset = synthesize(&profile, &synth, config.rule)?;
    // The reverse task trains on every group and tests on its participants.
    let (train, test) = match config.task {
        Task::GroupDecisionPrediction => {
            let (train, test) = split_dataset(&dataset, config.split_fraction, &mut stream_rng(seed, SPLIT_STREAM))?;
            (train, TestSet::from(&test))
        }
        Task::ReverseSocialChoice => {
            let test = build_reverse_test(&dataset, &profile)?;
            (dataset, test)
        }
    };
    let model = ModelConfig {
        num_users: profile.num_voters(),
        num_items: profile.num_alternatives(),
        seed: derive_seed(seed, MODEL_STREAM),
        ..config.model.clone()
    };
    config.methods.iter().map(|&m| evaluate(m, &train, &test, &model, &mut stream_rng(seed, m.stream()))).collect()
}

/// Runs every instance of `config` on an already-parsed profile.
pub fn run_experiment_with_profile(config: &ExperimentConfig, profile: &PreferenceProfile) -> Result<EvalReport, HarnessError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| HarnessError::Invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<f64>, HarnessError>> =
        pool.install(|| (0..config.instances).into_par_iter().map(|i| run_instance(config, profile, i)).collect());
    let mut per_instance = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        per_instance.push(r.map_err(|e| HarnessError::Instance { index, source: Box::new(e) })?);
    }
    let methods = config
        .methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let accuracies: Vec<f64> = per_instance.iter().map(|accs| accs[k]).collect();
            let (mean, std) = mean_std(&accuracies);
            MethodReport { method, accuracies, mean, std }
        })
        .collect();
    Ok(EvalReport {
        dataset: config.dataset.clone(),
        task: config.task,
        rule: config.rule,
        synth_method: config.synth.method,
        size_param: config.size_param(),
        methods,
    })
}

/// Reads the preference file and runs every instance of `config`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EvalReport, HarnessError> {
    config.validate()?;
    let profile = read_profile(&config.preference_file)?;
    run_experiment_with_profile(config, &profile)
}

/// Runs each cell in order, parsing each preference file once.
pub fn run_plan(cells: &[ExperimentConfig]) -> Result<Vec<EvalReport>, HarnessError> {
    let mut profiles: HashMap<PathBuf, PreferenceProfile> = HashMap::new();
    let mut reports = Vec::with_capacity(cells.len());
    for cell in cells {
        cell.validate()?;
        if !profiles.contains_key(&cell.preference_file) {
            profiles.insert(cell.preference_file.clone(), read_profile(&cell.preference_file)?);
        }
        reports.push(run_experiment_with_profile(cell, &profiles[&cell.preference_file])?);
    }
    Ok(reports)
}
