// Builds group datasets three ways: overlapping random partitions (KPG),
// like-minded groups (RSG) and opposed groups (RDG).

use std::error::Error;

use deepgroup::synth::{synthesize, SynthConfig, SynthMethod};
use deepgroup::{seeded_rng, standin, DecisionRule, GroupDataset};

fn describe(ds: &GroupDataset) {
    let mean_size = ds.groups.iter().map(|g| g.len()).sum::<usize>() as f64 / ds.len() as f64;
    println!(
        "{:>3}: {} groups, {} distinct users, mean size {mean_size:.2}",
        ds.method.map_or("-", |m| m.name()),
        ds.len(),
        ds.distinct_users().len()
    );
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let profile = standin::generate(&standin::SUSHI).sample_users(600, &mut seeded_rng(1))?;

    let kpg = SynthConfig { kappa: 3, seed: 7, ..SynthConfig::default() };
    let ds = synthesize(&profile, &kpg, DecisionRule::Plurality)?;
    describe(&ds);
    // Each user lands in at most kappa groups.
    let mut seen = vec![0; profile.num_voters()];
    ds.groups.iter().flat_map(|g| g.members()).for_each(|&u| seen[u] += 1);
    assert!(seen.iter().all(|&c| c <= 3));

    for method in [SynthMethod::Rsg, SynthMethod::Rdg] {
        let cfg = SynthConfig { method, l: 40, seed: 7, ..SynthConfig::default() };
        describe(&synthesize(&profile, &cfg, DecisionRule::Borda)?);
    }

    // Under the mixture rule every group records which rule decided it.
    let mixed = synthesize(&profile, &kpg, DecisionRule::MixtureBordaPlurality)?;
    let text = mixed.to_text();
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    assert_eq!(GroupDataset::from_text(&text)?, mixed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
