// Recovers individual first choices from group decisions alone: train on
// the groups, then score each participant as a group of one.

use std::error::Error;

use deepgroup::harness::{build_reverse_test, evaluate, Method};
use deepgroup::model::ModelConfig;
use deepgroup::synth::{synthesize, SynthConfig};
use deepgroup::{seeded_rng, standin, DecisionRule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let profile = standin::generate(&standin::SUSHI).sample_users(300, &mut seeded_rng(8))?;
    let config = ModelConfig {
        user_dim: 16,
        item_dim: 16,
        hidden_sizes: vec![32, 16],
        epochs: 25,
        batch_size: 512,
        ..ModelConfig::new(profile.num_voters(), profile.num_alternatives())
    };
    for kappa in [1, 8] {
        let groups = synthesize(&profile, &SynthConfig { kappa, seed: 3, ..SynthConfig::default() }, DecisionRule::Plurality)?;
        let test = build_reverse_test(&groups, &profile)?;
        let deep = evaluate(Method::DeepGroup, &groups, &test, &config, &mut seeded_rng(0))?;
        let pop = evaluate(Method::Pop, &groups, &test, &config, &mut seeded_rng(0))?;
        println!("kappa {kappa:>2}: {} users, DeepGroup {deep:.3}, Pop {pop:.3}", test.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
