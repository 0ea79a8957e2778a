// The five set aggregators. Reordering a group never changes its vector,
// and the vector length depends only on the aggregator.

use std::error::Error;

use deepgroup::model::{aggregate_group, Aggregator, ModelConfig, ModelParams};
use deepgroup::seeded_rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = ModelConfig { user_dim: 4, item_dim: 4, hidden_sizes: vec![8], ..ModelConfig::new(10, 3) };
    let params = ModelParams::init(&config, &mut seeded_rng(3))?;

    for aggregator in Aggregator::ALL {
        let q = aggregate_group(&[4, 1, 7], &params, aggregator)?;
        let shuffled = aggregate_group(&[7, 4, 1], &params, aggregator)?;
        assert_eq!(q, shuffled);
        assert_eq!(aggregate_group(&[2], &params, aggregator)?.numel(), aggregator.output_dim(config.user_dim));
        let shown: Vec<String> = q.data().iter().map(|v| format!("{v:+.4}")).collect();
        println!("{:<13} [{}]", aggregator.name(), shown.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
