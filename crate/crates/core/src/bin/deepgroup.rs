use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use deepgroup::harness::{
    accuracy, build_reverse_test, emit_results, parse_plan, run_plan, split_dataset, ExperimentConfig, FittedMethod, Method,
    TestSet,
};
use deepgroup::model::{load_model, save_model, train, ModelConfig};
use deepgroup::preflib::parse_preference_file;
use deepgroup::synth::{synthesize, SynthConfig};
use deepgroup::{seeded_rng, DecisionRule, GroupDataset, PreferenceProfile, SynthMethod};

type BoxError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "deepgroup", version, about = "Group decision prediction from group implicit feedback")]
struct Cli {
    /// Experiment file (key = value lines).
    #[arg(long, global = true, env = "DEEPGROUP_CONFIG")]
    config: Option<PathBuf>,
    /// Master seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory, depending on the subcommand.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for experiment instances.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print statistics of a preference file.
    Inspect { preference_file: PathBuf },
    /// Synthesize a group dataset from a preference file.
    Synth(SynthArgs),
    /// Split a group dataset, train one model and write a checkpoint.
    Train(TrainArgs),
    /// Accuracy of a checkpoint or a baseline on a group dataset.
    Eval(EvalArgs),
    /// Run every cell of the experiment file given by --config.
    Experiment,
}

#[derive(Args)]
struct SynthArgs {
    preference_file: PathBuf,
    #[arg(long, default_value = "KPG")]
    method: SynthMethod,
    #[arg(long, default_value_t = 5)]
    kappa: usize,
    #[arg(long, default_value_t = 1000)]
    l: usize,
    #[arg(long, default_value_t = 2)]
    s_min: usize,
    #[arg(long, default_value_t = 10)]
    s_max: usize,
    #[arg(long, default_value = "plurality")]
    rule: DecisionRule,
    /// Sample this many users first (KPG experiments use a fixed-size pool).
    #[arg(long)]
    users: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    dataset: PathBuf,
    /// Preference file the groups came from; sets the number of users.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, default_value_t = 0.7)]
    split: f64,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    aggregator: Option<deepgroup::model::Aggregator>,
}

#[derive(Args)]
struct EvalArgs {
    dataset: PathBuf,
    /// Checkpoint to evaluate. Without it, --baseline is fitted on --train.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, requires = "train")]
    baseline: Option<Method>,
    /// Training groups for a baseline, or for building the reverse test.
    #[arg(long)]
    train: Option<PathBuf>,
    /// Evaluate first-choice prediction for the users of --train instead.
    #[arg(long, requires_all = ["train", "profile"])]
    reverse: bool,
    #[arg(long)]
    profile: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, BoxError> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_profile(path: &Path) -> Result<PreferenceProfile, BoxError> {
    parse_preference_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_dataset(path: &Path) -> Result<GroupDataset, BoxError> {
    GroupDataset::from_text(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write(path: &Path, text: &str) -> Result<(), BoxError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Model hyperparameters from the config file, if one is given.
fn base_model_config(cli: &Cli) -> Result<ModelConfig, BoxError> {
    match &cli.config {
        Some(path) => {
            let dir = path.parent().unwrap_or(Path::new("."));
            let text = read(path)?;
            let with_file = if text.lines().any(|l| l.trim_start().starts_with("preference_file")) {
                text
            } else {
                format!("{text}\npreference_file = unused\n")
            };
            Ok(parse_plan(&with_file, dir)?.remove(0).model)
        }
        None => Ok(ExperimentConfig::new("unused").model),
    }
}

fn inspect(path: &Path) -> Result<(), BoxError> {
    let p = read_profile(path)?;
    let complete = p.voters().iter().filter(|r| r.is_complete()).count();
    let mean_len = p.voters().iter().map(|r| r.len()).sum::<usize>() as f64 / p.num_voters() as f64;
    println!("alternatives  {}", p.num_alternatives());
    println!("voters        {}", p.num_voters());
    println!("complete      {complete}");
    println!("mean length   {mean_len:.3}");
    let mut tops = vec![0usize; p.num_alternatives()];
    for r in p.voters() {
        tops[r.top().index()] += 1;
    }
    println!("first choices");
    for (i, (name, count)) in p.alternative_names().iter().zip(tops).enumerate() {
        println!("  {:>3} {:<24} {count}", i + 1, name);
    }
    Ok(())
}

fn synth(cli: &Cli, args: &SynthArgs) -> Result<(), BoxError> {
    let mut profile = read_profile(&args.preference_file)?;
    let seed = cli.seed.unwrap_or(0);
    if let Some(n) = args.users {
        profile = profile.sample_users(n, &mut seeded_rng(seed))?;
    }
    let config = SynthConfig {
        method: args.method,
        kappa: args.kappa,
        l: args.l,
        s_min: args.s_min,
        s_max: args.s_max,
        seed,
        ..SynthConfig::default()
    };
    let ds = synthesize(&profile, &config, args.rule)?;
    match &cli.out {
        Some(path) => {
            write(path, &ds.to_text())?;
            eprintln!("wrote {} groups to {}", ds.len(), path.display());
        }
        None => print!("{}", ds.to_text()),
    }
    Ok(())
}

fn train_cmd(cli: &Cli, args: &TrainArgs) -> Result<(), BoxError> {
    let ds = read_dataset(&args.dataset)?;
    let num_users = match &args.profile {
        Some(p) => read_profile(p)?.num_voters(),
        None => ds.distinct_users().last().map_or(0, |u| u + 1),
    };
    let seed = cli.seed.unwrap_or(0);
    let (train_set, test_set) = split_dataset(&ds, args.split, &mut seeded_rng(seed))?;
    let mut config = ModelConfig { num_users, num_items: ds.num_alternatives, seed, ..base_model_config(cli)? };
    if let Some(e) = args.epochs {
        config.epochs = e;
    }
    if let Some(lr) = args.learning_rate {
        config.learning_rate = lr;
    }
    if let Some(a) = args.aggregator {
        config.aggregator = a;
    }
    let outcome = train(&train_set, &config)?;
    let test_acc = accuracy(&outcome.model.predict_decisions(&test_set.groups)?, &test_set.decisions)?;
    println!("initial loss   {:.6}", outcome.initial_loss);
    println!("final loss     {:.6}", outcome.final_loss);
    println!("train accuracy {:.4}", outcome.training_accuracy(&train_set)?);
    println!("test accuracy  {test_acc:.4}");
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("run"));
    write(&dir.join("model.ckpt"), &save_model(&outcome.model))?;
    write(&dir.join("train.txt"), &train_set.to_text())?;
    write(&dir.join("test.txt"), &test_set.to_text())?;
    eprintln!("wrote model.ckpt, train.txt and test.txt to {}", dir.display());
    Ok(())
}

fn eval_cmd(cli: &Cli, args: &EvalArgs) -> Result<(), BoxError> {
    let test_ds = read_dataset(&args.dataset)?;
    let train_ds = args.train.as_deref().map(read_dataset).transpose()?;
    let test = if args.reverse {
        let profile = read_profile(args.profile.as_deref().expect("required by clap"))?;
        build_reverse_test(train_ds.as_ref().expect("required by clap"), &profile)?
    } else {
        TestSet::from(&test_ds)
    };
    let fitted = match (&args.model, args.baseline) {
        (Some(path), None) => FittedMethod::DeepGroup(Box::new(load_model(&read(path)?)?)),
        (None, Some(method)) if method != Method::DeepGroup => {
            let train_ds = train_ds.as_ref().expect("required by clap");
            FittedMethod::fit(method, train_ds, &ModelConfig::new(0, train_ds.num_alternatives))?
        }
        _ => return Err("give exactly one of --model or --baseline (pop, rtcp, osim)".into()),
    };
    let acc = accuracy(&fitted.predict(&test.groups, &mut seeded_rng(cli.seed.unwrap_or(0)))?, &test.truth)?;
    println!("{acc}");
    Ok(())
}

fn experiment(cli: &Cli) -> Result<(), BoxError> {
    let path = cli.config.as_deref().ok_or("experiment needs --config or DEEPGROUP_CONFIG")?;
    let mut cells = parse_plan(&read(path)?, path.parent().unwrap_or(Path::new(".")))?;
    for c in &mut cells {
        if let Some(s) = cli.seed {
            c.seed = s;
        }
        if let Some(j) = cli.jobs {
            c.jobs = j;
        }
        if let Some(o) = &cli.out {
            c.output = o.clone();
        }
    }
    let reports = run_plan(&cells)?;
    for r in &reports {
        let means: Vec<String> = r.methods.iter().map(|m| format!("{}={:.4}±{:.4}", m.method, m.mean, m.std)).collect();
        eprintln!("{} {} {} {} {}: {}", r.dataset, r.task, r.rule, r.synth_method, r.size_param, means.join(" "));
    }
    let (detail, summary) = emit_results(&reports, &cells[0].output)?;
    eprintln!("wrote {} and {}", detail.display(), summary.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Inspect { preference_file } => inspect(preference_file),
        Command::Synth(args) => synth(&cli, args),
        Command::Train(args) => train_cmd(&cli, args),
        Command::Eval(args) => eval_cmd(&cli, args),
        Command::Experiment => experiment(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
