//! Acceptance criteria, one PASS/FAIL line each.
//!
//! C1 to C4 and C9 check the implementation and gate the exit status. C5 to
//! C8 reproduce accuracy trends that were observed on four public datasets.
//! They run on the real files when `DEEPGROUP_DATA_DIR` holds them and gate
//! only in that case; on the synthetic stand-ins their outcome is reported but
//! does not fail the run.
//!
//! Pass criterion ids (`C3 C9`) as arguments to run a subset.

use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use deepgroup::harness::{emit_results, run_experiment_with_profile, ExperimentConfig, Method, Task, DETAIL_FILE};
use deepgroup::model::{aggregate_group, forward, loss_and_gradients, train, Aggregator, ModelConfig, ModelParams};
use deepgroup::preflib::parse_preference_file;
use deepgroup::social_choice::{argmax_set, cumulative_scores, group_decision};
use deepgroup::standin::{self, DatasetShape};
use deepgroup::synth::SynthMethod;
use deepgroup::tensor::{Graph, ReduceOp, Tensor, Var};
use deepgroup::{seeded_rng, AlternativeId, DecisionRule, Group, GroupDataset, PreferenceProfile, Ranking, Rng64};

struct Verdict {
    pass: bool,
    detail: String,
    /// Whether a failure fails the run.
    gating: bool,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail, gating: true }
}

// ---------------------------------------------------------------- C1

const H: f64 = 1e-4;
const TOLERANCE: f64 = 1e-4;
const TRIALS: usize = 100;

fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-6)
}

enum Check {
    Ok(f64),
    /// A perturbation crossed a kink; the trial is redrawn.
    Kink,
}

/// Compares the analytic gradient of a scalar function of `inputs` with
/// central differences. `build` must be a pure function of the leaf values.
#[allow(clippy::needless_range_loop)]
fn grad_check(inputs: &[Tensor], build: &dyn Fn(&mut Graph, &[Var]) -> Var) -> Check {
    let eval = |values: &[Tensor]| {
        let mut g = Graph::new();
        let vars: Vec<Var> = values.iter().map(|t| g.leaf(t)).collect();
        let out = build(&mut g, &vars);
        g.value(out).data()[0]
    };
    let mut g = Graph::new();
    let vars: Vec<Var> = inputs.iter().map(|t| g.leaf(t)).collect();
    let out = build(&mut g, &vars);
    g.backward(out).unwrap();
    let f0 = g.value(out).data()[0];
    let mut worst: f64 = 0.0;
    for (i, v) in vars.iter().enumerate() {
        let analytic = g.grad(*v).map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; inputs[i].numel()]);
        for j in 0..inputs[i].numel() {
            let mut plus = inputs.to_vec();
            plus[i].data_mut()[j] += H;
            let mut minus = inputs.to_vec();
            minus[i].data_mut()[j] -= H;
            let (fp, fm) = (eval(&plus), eval(&minus));
            let numeric = (fp - fm) / (2.0 * H);
            let err = rel_err(analytic[j], numeric);
            if err > TOLERANCE {
                let one_sided = ((fp - f0) / H - (f0 - fm) / H).abs();
                if one_sided >= (analytic[j] - numeric).abs() {
                    return Check::Kink;
                }
            }
            worst = worst.max(err);
        }
    }
    Check::Ok(worst)
}

fn random_tensor(rng: &mut Rng64, shape: Vec<usize>, lo: f64, hi: f64) -> Tensor {
    let n = shape.iter().product();
    Tensor::new(shape, (0..n).map(|_| rng.random_range(lo..hi)).collect()).unwrap()
}

/// Values at least `gap` away from each other within every column, and from 0.
fn separated_rows(rng: &mut Rng64, k: usize, d: usize, gap: f64) -> Tensor {
    loop {
        let t = random_tensor(rng, vec![k, d], -2.0, 2.0);
        let ok = (0..d).all(|c| {
            let mut col: Vec<f64> = (0..k).map(|r| t.data()[r * d + c]).collect();
            col.push(0.0);
            col.sort_by(f64::total_cmp);
            col.windows(2).all(|w| w[1] - w[0] > gap)
        });
        if ok {
            return t;
        }
    }
}

/// Random weights so the scalar output depends on every element.
fn project(g: &mut Graph, v: Var, seed: u64) -> Var {
    let n = g.value(v).numel();
    let mut rng = seeded_rng(seed);
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    g.weighted_sum(v, &w).unwrap()
}

type Case = (Vec<Tensor>, Box<dyn Fn(&mut Graph, &[Var]) -> Var>);

fn op_case(op: &str, rng: &mut Rng64, seed: u64) -> Case {
    let (r, p, q) = (rng.random_range(1..5), rng.random_range(1..6), rng.random_range(1..6));
    match op {
        "linear" => (
            vec![
                random_tensor(rng, vec![r, p], -1.0, 1.0),
                random_tensor(rng, vec![q, p], -1.0, 1.0),
                random_tensor(rng, vec![q], -1.0, 1.0),
            ],
            Box::new(move |g, v| {
                let y = g.linear(v[0], v[1], v[2]).unwrap();
                project(g, y, seed)
            }),
        ),
        "relu" => (
            vec![separated_rows(rng, r, p, 1e-3)],
            Box::new(move |g, v| {
                let y = g.relu(v[0]);
                project(g, y, seed)
            }),
        ),
        "sigmoid" => (
            vec![random_tensor(rng, vec![r, p], -6.0, 6.0)],
            Box::new(move |g, v| {
                let y = g.sigmoid(v[0]);
                project(g, y, seed)
            }),
        ),
        "dropout" => {
            let keep = rng.random_range(0.3..1.0);
            (
                vec![random_tensor(rng, vec![r, p], -2.0, 2.0)],
                Box::new(move |g, v| {
                    let y = g.dropout(v[0], keep, true, &mut seeded_rng(seed ^ 0xd0)).unwrap();
                    project(g, y, seed)
                }),
            )
        }
        "gather_rows" => {
            let rows = rng.random_range(1..5);
            let idx: Vec<usize> = (0..rng.random_range(1..7)).map(|_| rng.random_range(0..rows)).collect();
            (
                vec![random_tensor(rng, vec![rows, p], -1.0, 1.0)],
                Box::new(move |g, v| {
                    let y = g.gather_rows(v[0], &idx).unwrap();
                    project(g, y, seed)
                }),
            )
        }
        "concat_cols" => (
            vec![
                random_tensor(rng, vec![r, p], -1.0, 1.0),
                random_tensor(rng, vec![r, q], -1.0, 1.0),
                random_tensor(rng, vec![r, 2], -1.0, 1.0),
            ],
            Box::new(move |g, v| {
                let y = g.concat_cols(v).unwrap();
                project(g, y, seed)
            }),
        ),
        "bce_loss" => {
            let targets =
                Tensor::new(vec![r, 1], (0..r).map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 }).collect()).unwrap();
            (vec![random_tensor(rng, vec![r, 1], 0.05, 0.95)], Box::new(move |g, v| g.bce_loss(v[0], &targets).unwrap()))
        }
        "sum" => (vec![random_tensor(rng, vec![r, p], -1.0, 1.0)], Box::new(|g, v| g.sum(v[0]))),
        "weighted_sum" => (vec![random_tensor(rng, vec![r, p], -1.0, 1.0)], Box::new(move |g, v| project(g, v[0], seed))),
        other => {
            let (kind, name) = other.split_once(':').unwrap();
            let reduce: ReduceOp = name.parse().unwrap();
            if kind == "elementwise" {
                let k = rng.random_range(1..7);
                (
                    vec![separated_rows(rng, k, p, 1e-3)],
                    Box::new(move |g, v| {
                        let y = g.elementwise_reduce(v[0], reduce).unwrap();
                        project(g, y, seed)
                    }),
                )
            } else {
                let sizes: Vec<usize> = (0..rng.random_range(1..4)).map(|_| rng.random_range(1..5)).collect();
                let mut offsets = vec![0];
                for s in &sizes {
                    offsets.push(offsets.last().unwrap() + s);
                }
                let k = *offsets.last().unwrap();
                (
                    vec![separated_rows(rng, k, p, 1e-3)],
                    Box::new(move |g, v| {
                        let y = g.segment_reduce(v[0], &offsets, reduce).unwrap();
                        project(g, y, seed)
                    }),
                )
            }
        }
    }
}

type ModelCase = (ModelParams, ModelConfig, Vec<Vec<usize>>, Vec<usize>, Vec<f64>, u64);

fn model_case(rng: &mut Rng64, trial: usize) -> ModelCase {
    let aggregator = Aggregator::ALL[trial % Aggregator::ALL.len()];
    let n = rng.random_range(3..8);
    let m = rng.random_range(2..5);
    let hidden: Vec<usize> = (0..rng.random_range(1..3)).map(|_| rng.random_range(2..6)).collect();
    let config = ModelConfig {
        user_dim: rng.random_range(2..5),
        item_dim: rng.random_range(2..5),
        hidden_sizes: hidden,
        aggregator,
        keep_prob: 0.8,
        ..ModelConfig::new(n, m)
    };
    let mut params = ModelParams::init(&config, rng).unwrap();
    // Embeddings at unit scale so the group part carries real gradient.
    for t in [&mut params.user_embeddings, &mut params.item_embeddings] {
        t.data_mut().iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
    }
    let records = rng.random_range(1..5);
    let groups: Vec<Vec<usize>> = (0..records)
        .map(|_| {
            let mut users: Vec<usize> = (0..n).collect();
            users.shuffle(rng);
            users.truncate(rng.random_range(1..=n.min(4)));
            users
        })
        .collect();
    let items = (0..records).map(|_| rng.random_range(0..m)).collect();
    let targets = (0..records).map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 }).collect();
    (params, config, groups, items, targets, rng.random())
}

#[allow(clippy::needless_range_loop)]
fn model_grad_check(rng: &mut Rng64, trial: usize) -> Check {
    let (params, config, groups, items, targets, dropout_seed) = model_case(rng, trial);
    let refs: Vec<&[usize]> = groups.iter().map(Vec::as_slice).collect();
    let loss = |p: &ModelParams| loss_and_gradients(p, &config, &refs, &items, &targets, true, dropout_seed).unwrap();
    let (f0, analytic) = loss(&params);
    let mut worst: f64 = 0.0;
    for (i, grad) in analytic.iter().enumerate() {
        for j in 0..grad.len() {
            let mut plus = params.clone();
            plus.tensors_mut()[i].data_mut()[j] += H;
            let mut minus = params.clone();
            minus.tensors_mut()[i].data_mut()[j] -= H;
            let (fp, fm) = (loss(&plus).0, loss(&minus).0);
            let numeric = (fp - fm) / (2.0 * H);
            let err = rel_err(grad[j], numeric);
            if err > TOLERANCE {
                let one_sided = ((fp - f0) / H - (f0 - fm) / H).abs();
                if one_sided >= (grad[j] - numeric).abs() {
                    return Check::Kink;
                }
            }
            worst = worst.max(err);
        }
    }
    Check::Ok(worst)
}

fn c1() -> Verdict {
    let ops = [
        "linear",
        "relu",
        "sigmoid",
        "dropout",
        "gather_rows",
        "concat_cols",
        "bce_loss",
        "sum",
        "weighted_sum",
        "elementwise:mean",
        "elementwise:max",
        "elementwise:min",
        "elementwise:median",
        "segment:mean",
        "segment:max",
        "segment:min",
        "segment:median",
    ];
    let mut rng = seeded_rng(0xc1);
    let mut worst_overall: (f64, &str) = (0.0, "");
    let mut redraws = 0;
    let mut all = |name: &'static str, trial_fn: &mut dyn FnMut(&mut Rng64, usize) -> Check| {
        let mut done = 0;
        let mut attempts = 0;
        while done < TRIALS {
            attempts += 1;
            match trial_fn(&mut rng, done) {
                Check::Ok(err) => {
                    if err > worst_overall.0 {
                        worst_overall = (err, name);
                    }
                    done += 1;
                }
                Check::Kink => redraws += 1,
            }
            assert!(attempts < 10 * TRIALS, "{name}: too many kinks");
        }
    };
    for op in ops {
        all(op, &mut |rng, t| {
            let (inputs, build) = op_case(op, rng, t as u64);
            grad_check(&inputs, build.as_ref())
        });
    }
    all("model", &mut model_grad_check);
    verdict(
        worst_overall.0 < TOLERANCE,
        format!(
            "{} ops + full model x {TRIALS} trials, max relative error {:.2e} ({}), {redraws} kink redraws",
            ops.len(),
            worst_overall.0,
            worst_overall.1
        ),
    )
}

// ---------------------------------------------------------------- C2

/// Scores straight from the definitions: m - position for ranked
/// alternatives, 1 for a first place.
fn brute_force_winners(ballots: &[Vec<usize>], m: usize, borda: bool) -> Vec<usize> {
    let mut best = Vec::new();
    let mut best_score = -1i64;
    for a in 1..=m {
        let mut score = 0i64;
        for b in ballots {
            for (pos, &x) in b.iter().enumerate() {
                if x == a {
                    score += if borda { (m - (pos + 1)) as i64 } else { (pos == 0) as i64 };
                }
            }
        }
        if score > best_score {
            best_score = score;
            best = vec![a - 1];
        } else if score == best_score {
            best.push(a - 1);
        }
    }
    best
}

fn c2() -> Verdict {
    let mut rng = seeded_rng(0xc2);
    let mut agree = 0;
    let cases = 1000;
    for _ in 0..cases {
        let m = rng.random_range(1..=5);
        let members = rng.random_range(1..=6);
        let ballots: Vec<Vec<usize>> = (0..members)
            .map(|_| {
                let mut b: Vec<usize> = (1..=m).collect();
                b.shuffle(&mut rng);
                b.truncate(rng.random_range(1..=m));
                b
            })
            .collect();
        let rankings: Vec<Ranking> = ballots.iter().map(|b| Ranking::from_ids(b, m).unwrap()).collect();
        let refs: Vec<&Ranking> = rankings.iter().collect();
        let mut ok = true;
        for (rule, borda) in [(DecisionRule::Borda, true), (DecisionRule::Plurality, false)] {
            let expected = brute_force_winners(&ballots, m, borda);
            let got = argmax_set(&cumulative_scores(&refs, rule).unwrap());
            let decision = group_decision(&refs, rule, &mut rng).unwrap();
            ok &= got == expected && expected.contains(&decision.index());
        }
        agree += ok as usize;
    }
    verdict(agree == cases, format!("{agree}/{cases} random profiles agree for Borda and plurality"))
}

// ---------------------------------------------------------------- C3

fn c3() -> Verdict {
    let mut rng = seeded_rng(0xc3);
    let base = ModelConfig { user_dim: 6, item_dim: 3, hidden_sizes: vec![5], ..ModelConfig::new(40, 4) };
    let mut failures = 0;
    let groups = 1000;
    for trial in 0..groups {
        let params = ModelParams::init(&ModelConfig { seed: trial, ..base.clone() }, &mut rng).unwrap();
        let mut members: Vec<usize> = (0..40).collect();
        members.shuffle(&mut rng);
        members.truncate(1 + (trial as usize % 10));
        let mut shuffled = members.clone();
        shuffled.shuffle(&mut rng);
        for aggregator in Aggregator::ALL {
            let a = aggregate_group(&members, &params, aggregator).unwrap();
            let b = aggregate_group(&shuffled, &params, aggregator).unwrap();
            let bits = |t: &Tensor| t.data().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            let cfg = ModelConfig { aggregator, ..base.clone() };
            let params = ModelParams::init(&ModelConfig { seed: trial, ..cfg.clone() }, &mut seeded_rng(trial)).unwrap();
            let pa = forward(&members, 1, &params, &cfg, false, &mut seeded_rng(0)).unwrap();
            let pb = forward(&shuffled, 1, &params, &cfg, false, &mut seeded_rng(0)).unwrap();
            let ok = bits(&a) == bits(&b)
                && a.numel() == aggregator.output_dim(base.user_dim)
                && pa.to_bits() == pb.to_bits()
                && pa > 0.0
                && pa < 1.0;
            failures += (!ok) as usize;
        }
    }
    verdict(failures == 0, format!("{groups} groups of size 1-10 x 5 aggregators, {failures} violations"))
}

// ---------------------------------------------------------------- C4

fn c4() -> Verdict {
    let groups: Vec<Group> = (0..20).map(|i| Group::new(vec![2 * i, 2 * i + 1]).unwrap()).collect();
    let ds = GroupDataset {
        decisions: (0..20).map(|i| AlternativeId::from_index(i % 5)).collect(),
        rules_used: vec![DecisionRule::Plurality; 20],
        groups,
        num_alternatives: 5,
        method: None,
        rule: DecisionRule::Plurality,
        seed: 0,
    };
    let config = ModelConfig { epochs: 500, ..ModelConfig::new(40, 5) };
    let out = train(&ds, &config).unwrap();
    let acc = out.training_accuracy(&ds).unwrap();
    let ratio = out.final_loss / out.initial_loss;
    verdict(
        acc >= 0.95 && ratio < 0.1,
        format!("training accuracy {acc:.3}, final/initial loss {ratio:.2e} after 500 epochs at default settings"),
    )
}

// ---------------------------------------------------------------- trends

struct Data {
    profile: PreferenceProfile,
    real: bool,
    name: &'static str,
}

fn load(shape: &DatasetShape, dir: &Path) -> Data {
    let (path, real) = standin::resolve_file(shape, dir).unwrap();
    let profile = parse_preference_file(&std::fs::read_to_string(path).unwrap()).unwrap();
    Data { profile, real, name: shape.name }
}

fn source(all: &[&Data]) -> (&'static str, bool) {
    if all.iter().all(|d| d.real) {
        ("real data", true)
    } else {
        ("stand-in data, not gating", false)
    }
}

fn cell(
    data: &Data,
    task: Task,
    rule: DecisionRule,
    method: SynthMethod,
    size: usize,
    instances: usize,
    n: Option<usize>,
) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(format!("{}.txt", data.name));
    c.task = task;
    c.rule = rule;
    c.synth.method = method;
    match method {
        SynthMethod::Kpg => c.synth.kappa = size,
        _ => c.synth.l = size,
    }
    c.instances = instances;
    c.n_users = n;
    c.seed = 2024;
    c
}

fn c5(dir: &Path) -> Verdict {
    let data = load(&standin::DUBLIN_WEST, dir);
    let mut deep = Vec::new();
    let mut margin = f64::INFINITY;
    for kappa in [1, 5, 20] {
        let c = cell(&data, Task::GroupDecisionPrediction, DecisionRule::Plurality, SynthMethod::Kpg, kappa, 20, Some(2000));
        let r = run_experiment_with_profile(&c, &data.profile).unwrap();
        deep.push(r.mean(Method::DeepGroup));
        if kappa == 20 {
            margin = [Method::Pop, Method::Rtcp, Method::OSim]
                .iter()
                .map(|&m| r.mean(Method::DeepGroup) - r.mean(m))
                .fold(f64::INFINITY, f64::min);
        }
    }
    let monotone = deep.windows(2).all(|w| w[1] >= w[0]);
    let (src, gating) = source(&[&data]);
    Verdict {
        pass: monotone && margin >= 0.10,
        detail: format!(
            "DeepGroup at kappa 1/5/20: {:.3} {:.3} {:.3}; margin over best baseline at 20: {:+.3} ({src})",
            deep[0], deep[1], deep[2], margin
        ),
        gating,
    }
}

fn c6(dir: &Path) -> Verdict {
    let all: Vec<Data> = standin::ALL_SHAPES.iter().map(|s| load(s, dir)).collect();
    let mut wins = 0;
    let mut notes = Vec::new();
    for data in &all {
        let mut ok = true;
        let mut gaps = Vec::new();
        for rule in [DecisionRule::Plurality, DecisionRule::Borda, DecisionRule::MixtureBordaPlurality] {
            let c = cell(data, Task::GroupDecisionPrediction, rule, SynthMethod::Kpg, 5, 5, Some(2000));
            let r = run_experiment_with_profile(&c, &data.profile).unwrap();
            let gap = [Method::Pop, Method::Rtcp, Method::OSim]
                .iter()
                .map(|&m| r.mean(Method::DeepGroup) - r.mean(m))
                .fold(f64::INFINITY, f64::min);
            ok &= gap >= 0.0;
            gaps.push(format!("{gap:+.3}"));
        }
        wins += ok as usize;
        notes.push(format!("{} [{}]", data.name, gaps.join(" ")));
    }
    let (src, gating) = source(&all.iter().collect::<Vec<_>>());
    Verdict {
        pass: wins >= 3,
        detail: format!(
            "{wins}/4 datasets where DeepGroup >= all baselines; gap to best baseline per rule: {} ({src})",
            notes.join(", ")
        ),
        gating,
    }
}

fn c7(dir: &Path) -> Verdict {
    let data = load(&standin::SUSHI, dir);
    let acc = |rule| -> Vec<f64> {
        [1, 5, 10]
            .iter()
            .map(|&kappa| {
                let mut c = cell(&data, Task::ReverseSocialChoice, rule, SynthMethod::Kpg, kappa, 5, Some(2000));
                c.methods = vec![Method::DeepGroup];
                run_experiment_with_profile(&c, &data.profile).unwrap().mean(Method::DeepGroup)
            })
            .collect()
    };
    let plurality = acc(DecisionRule::Plurality);
    let borda = acc(DecisionRule::Borda);
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    let dominates = plurality.iter().zip(&borda).all(|(p, b)| p >= b);
    let (src, gating) = source(&[&data]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    Verdict {
        pass: increasing(&plurality) && increasing(&borda) && dominates,
        detail: format!("kappa 1/5/10 plurality: {}; borda: {} ({src})", fmt(&plurality), fmt(&borda)),
        gating,
    }
}

fn c8(dir: &Path) -> Verdict {
    let data = load(&standin::SUSHI, dir);
    let mut wins = 0;
    let mut notes = Vec::new();
    for task in [Task::GroupDecisionPrediction, Task::ReverseSocialChoice] {
        for rule in [DecisionRule::Plurality, DecisionRule::Borda] {
            let mean = |method| {
                let mut c = cell(&data, task, rule, method, 500, 20, None);
                c.methods = vec![Method::DeepGroup];
                run_experiment_with_profile(&c, &data.profile).unwrap().mean(Method::DeepGroup)
            };
            let (rsg, rdg) = (mean(SynthMethod::Rsg), mean(SynthMethod::Rdg));
            wins += (rsg > rdg) as usize;
            notes.push(format!("{task}/{rule} {rsg:.3} vs {rdg:.3}"));
        }
    }
    let (src, gating) = source(&[&data]);
    Verdict { pass: wins == 4, detail: format!("RSG > RDG in {wins}/4: {} ({src})", notes.join(", ")), gating }
}

// ---------------------------------------------------------------- C9

fn c9(dir: &Path) -> Verdict {
    let data = load(&standin::SUSHI, dir);
    let run = |jobs: usize, out: &Path| {
        let mut c =
            cell(&data, Task::GroupDecisionPrediction, DecisionRule::MixtureBordaPlurality, SynthMethod::Kpg, 3, 3, Some(300));
        c.model.user_dim = 8;
        c.model.item_dim = 8;
        c.model.hidden_sizes = vec![8, 4];
        c.model.epochs = 5;
        c.jobs = jobs;
        let r = run_experiment_with_profile(&c, &data.profile).unwrap();
        emit_results(&[r], out).unwrap();
        std::fs::read(out.join(DETAIL_FILE)).unwrap()
    };
    let a = run(1, &dir.join("c9-a"));
    let b = run(1, &dir.join("c9-b"));
    let c = run(2, &dir.join("c9-c"));
    verdict(a == b && a == c && !a.is_empty(), format!("three reruns (1, 1 and 2 workers) give {} identical bytes", a.len()))
}

type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("C1", "gradient suite", Box::new(c1)),
        ("C2", "social-choice oracle", Box::new(c2)),
        ("C3", "aggregator properties", Box::new(c3)),
        ("C4", "overfit check", Box::new(c4)),
        ("C5", "participation trend", Box::new(|| c5(d))),
        ("C6", "decision-rule comparison", Box::new(|| c6(d))),
        ("C7", "reverse social choice trend", Box::new(|| c7(d))),
        ("C8", "homophilic vs heterophilic groups", Box::new(|| c8(d))),
        ("C9", "determinism", Box::new(|| c9(d))),
    ];
    let mut gating_failures = 0;
    for (id, title, run) in &criteria {
        if !filters.is_empty() && !filters.iter().any(|f| f.eq_ignore_ascii_case(id)) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        let status = match (v.pass, v.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (reported only)",
        };
        gating_failures += (!v.pass && v.gating) as usize;
        println!("{id} {status} {title}: {} [{:.1}s]", v.detail, start.elapsed().as_secs_f64());
    }
    if gating_failures > 0 {
        eprintln!("{gating_failures} gating criteria failed");
        std::process::exit(1);
    }
}
