//! Flat `key = value` experiment files.
//!
//! ```text
//! # Dublin West, plurality, participation sweep
//! preference_file = data/dublin_west.soi
//! n_users = 2000
//! synth_method = KPG
//! kappa = 1, 5, 20
//! rule = plurality
//! task = group
//! methods = deepgroup, pop, rtcp, osim
//! instances = 20
//! seed = 7
//! ```
//!
//! `preference_file`, `synth_method`, `kappa`, `l` and `rule` accept
//! comma-separated lists; the plan is their cartesian product.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::HarnessError;
use crate::model::{Aggregator, ModelConfig};
use crate::social_choice::DecisionRule;
use crate::synth::{SynthConfig, SynthMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    GroupDecisionPrediction,
    ReverseSocialChoice,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::GroupDecisionPrediction => "group-decision",
            Task::ReverseSocialChoice => "reverse-social-choice",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "group" | "group-decision" | "gdp" => Ok(Task::GroupDecisionPrediction),
            "reverse" | "reverse-social-choice" | "rsc" => Ok(Task::ReverseSocialChoice),
            other => Err(format!("unknown task {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    DeepGroup,
    Pop,
    Rtcp,
    OSim,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::DeepGroup, Method::Pop, Method::Rtcp, Method::OSim];

    pub fn name(self) -> &'static str {
        match self {
            Method::DeepGroup => "DeepGroup",
            Method::Pop => "Pop",
            Method::Rtcp => "RTCP",
            Method::OSim => "O-Sim",
        }
    }

    /// Random stream reserved for this method within an instance.
    pub(crate) fn stream(self) -> u64 {
        match self {
            Method::DeepGroup => 10,
            Method::Pop => 11,
            Method::Rtcp => 12,
            Method::OSim => 13,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deepgroup" => Ok(Method::DeepGroup),
            "pop" => Ok(Method::Pop),
            "rtcp" => Ok(Method::Rtcp),
            "osim" | "o-sim" => Ok(Method::OSim),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// One cell of an experiment: everything needed to run all its instances.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preference_file: PathBuf,
    /// Label used in the result files; defaults to the file stem.
    pub dataset: String,
    /// Users sampled per instance; `None` uses the whole profile.
    pub n_users: Option<usize>,
    /// `seed` is ignored here: each instance derives its own.
    pub synth: SynthConfig,
    pub rule: DecisionRule,
    pub task: Task,
    pub methods: Vec<Method>,
    /// `num_users`, `num_items` and `seed` are filled in per instance.
    pub model: ModelConfig,
    pub instances: usize,
    pub split_fraction: f64,
    pub output: PathBuf,
    pub seed: u64,
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn new(preference_file: impl Into<PathBuf>) -> Self {
        let preference_file = preference_file.into();
        let dataset = preference_file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        ExperimentConfig {
            preference_file,
            dataset,
            n_users: None,
            synth: SynthConfig::default(),
            rule: DecisionRule::Plurality,
            task: Task::GroupDecisionPrediction,
            methods: Method::ALL.to_vec(),
            model: ModelConfig::new(0, 0),
            instances: 20,
            split_fraction: 0.7,
            output: PathBuf::from("results"),
            seed: 0,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Invalid(m));
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return bad(format!("split_fraction {} must lie in (0, 1)", self.split_fraction));
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if self.synth.s_min < 1 || self.synth.s_min > self.synth.s_max {
            return bad(format!("size bounds [{}, {}] are invalid", self.synth.s_min, self.synth.s_max));
        }
        if self.n_users == Some(0) {
            return bad("n_users must be positive".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        let mut probe = self.model.clone();
        probe.num_users = 1;
        probe.num_items = 1;
        probe.validate().map_err(|e| HarnessError::Invalid(e.to_string()))
    }

    /// κ for KPG cells, l otherwise.
    pub fn size_param(&self) -> usize {
        match self.synth.method {
            SynthMethod::Kpg => self.synth.kappa,
            SynthMethod::Rsg | SynthMethod::Rdg => self.synth.l,
        }
    }
}

fn list<T: FromStr>(value: &str, line: usize) -> Result<Vec<T>, HarnessError>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| HarnessError::Config { line, message: format!("{s:?}: {e}") }))
        .collect()
}

fn single<T: FromStr>(value: &str, line: usize) -> Result<T, HarnessError>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| HarnessError::Config { line, message: format!("{value:?}: {e}") })
}

/// Parses an experiment file into its cells. Relative preference-file paths
/// are resolved against `base_dir`.
pub fn parse_plan(text: &str, base_dir: &Path) -> Result<Vec<ExperimentConfig>, HarnessError> {
    let mut base = ExperimentConfig::new(PathBuf::new());
    let mut files: Vec<PathBuf> = Vec::new();
    let mut dataset_names: Option<Vec<String>> = None;
    let mut methods_synth = vec![base.synth.method];
    let mut kappas = vec![base.synth.kappa];
    let mut ls = vec![base.synth.l];
    let mut rules = vec![base.rule];

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (key, value) = l
            .split_once('=')
            .ok_or_else(|| HarnessError::Config { line, message: format!("expected key = value, got {l:?}") })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "preference_file" => files = value.split(',').map(|s| base_dir.join(s.trim())).collect(),
            "dataset" => dataset_names = Some(value.split(',').map(|s| s.trim().to_string()).collect()),
            "n_users" => base.n_users = if value.eq_ignore_ascii_case("all") { None } else { Some(single(value, line)?) },
            "synth_method" => methods_synth = list(value, line)?,
            "kappa" => kappas = list(value, line)?,
            "l" => ls = list(value, line)?,
            "s_min" => base.synth.s_min = single(value, line)?,
            "s_max" => base.synth.s_max = single(value, line)?,
            "tau_sim" => base.synth.tau_sim = single(value, line)?,
            "tau_dis" => base.synth.tau_dis = single(value, line)?,
            "rule" => {
                rules = value
                    .split(',')
                    .map(|s| s.parse::<DecisionRule>().map_err(|e| HarnessError::Config { line, message: e.to_string() }))
                    .collect::<Result<_, _>>()?
            }
            "task" => base.task = single(value, line)?,
            "methods" => base.methods = list(value, line)?,
            "instances" => base.instances = single(value, line)?,
            "split_fraction" => base.split_fraction = single(value, line)?,
            "output" => base.output = PathBuf::from(value),
            "seed" => base.seed = single(value, line)?,
            "jobs" => base.jobs = single(value, line)?,
            "user_dim" => base.model.user_dim = single(value, line)?,
            "item_dim" => base.model.item_dim = single(value, line)?,
            "hidden_sizes" => base.model.hidden_sizes = list(value, line)?,
            "aggregator" => base.model.aggregator = single::<Aggregator>(value, line)?,
            "keep_prob" => base.model.keep_prob = single(value, line)?,
            "learning_rate" => base.model.learning_rate = single(value, line)?,
            "epochs" => base.model.epochs = single(value, line)?,
            "batch_size" => base.model.batch_size = single(value, line)?,
            other => return Err(HarnessError::Config { line, message: format!("unknown key {other:?}") }),
        }
    }
    if files.is_empty() {
        return Err(HarnessError::Config { line: 0, message: "preference_file is required".into() });
    }
    if let Some(names) = &dataset_names {
        if names.len() != files.len() {
            return Err(HarnessError::Config { line: 0, message: "dataset needs one name per preference_file".into() });
        }
    }

    let mut cells = Vec::new();
    for (f, file) in files.iter().enumerate() {
        for &method in &methods_synth {
            let sizes = if method == SynthMethod::Kpg { &kappas } else { &ls };
            for &size in sizes {
                for &rule in &rules {
                    let mut cell = base.clone();
                    cell.preference_file = file.clone();
                    cell.dataset = match &dataset_names {
                        Some(names) => names[f].clone(),
                        None => file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                    };
                    cell.synth.method = method;
                    match method {
                        SynthMethod::Kpg => cell.synth.kappa = size,
                        _ => cell.synth.l = size,
                    }
                    cell.rule = rule;
                    cell.validate()?;
                    cells.push(cell);
                }
            }
        }
    }
    Ok(cells)
}
