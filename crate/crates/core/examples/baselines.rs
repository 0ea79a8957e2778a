// The membership-only heuristics on a held-out split.

use std::error::Error;

use deepgroup::baselines::{osim_predict, pop_predict, rtcp_predict, TrainingSummary};
use deepgroup::harness::{accuracy, split_dataset};
use deepgroup::synth::{synthesize, SynthConfig};
use deepgroup::{seeded_rng, standin, DecisionRule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let profile = standin::generate(&standin::DUBLIN_WEST).sample_users(1000, &mut seeded_rng(4))?;
    let groups = synthesize(&profile, &SynthConfig { kappa: 5, seed: 1, ..SynthConfig::default() }, DecisionRule::Plurality)?;
    let (train_set, test_set) = split_dataset(&groups, 0.7, &mut seeded_rng(2))?;
    let summary = TrainingSummary::new(&train_set)?;
    let mut rng = seeded_rng(9);

    let pop: Vec<_> = test_set.groups.iter().map(|_| pop_predict(&summary, &mut rng)).collect();
    let rtcp = test_set.groups.iter().map(|g| rtcp_predict(g, &summary, &mut rng)).collect::<Result<Vec<_>, _>>()?;
    let osim = test_set.groups.iter().map(|g| osim_predict(g, &summary, &mut rng)).collect::<Result<Vec<_>, _>>()?;
    for (name, predicted) in [("Pop", pop), ("RTCP", rtcp), ("O-Sim", osim)] {
        println!("{name:<6} {:.3}", accuracy(&predicted, &test_set.decisions)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
