// Trains the group scorer on one split, reports held-out accuracy and
// round-trips the checkpoint.

use std::error::Error;

use deepgroup::harness::{accuracy, split_dataset};
use deepgroup::model::{load_model, save_model, train, ModelConfig};
use deepgroup::synth::{synthesize, SynthConfig};
use deepgroup::{seeded_rng, standin, DecisionRule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let profile = standin::generate(&standin::SUSHI).sample_users(300, &mut seeded_rng(2))?;
    let groups = synthesize(&profile, &SynthConfig { kappa: 10, seed: 5, ..SynthConfig::default() }, DecisionRule::Plurality)?;
    let (train_set, test_set) = split_dataset(&groups, 0.7, &mut seeded_rng(6))?;

    let config = ModelConfig {
        user_dim: 16,
        item_dim: 16,
        hidden_sizes: vec![32, 16],
        epochs: 60,
        batch_size: 512,
        learning_rate: 0.01,
        ..ModelConfig::new(profile.num_voters(), profile.num_alternatives())
    };
    let outcome = train(&train_set, &config)?;
    let every = (outcome.loss_trace.len() / 6).max(1);
    for (epoch, loss) in outcome.loss_trace.iter().enumerate().step_by(every) {
        println!("epoch {epoch:>3}  loss {loss:.4}");
    }
    assert!(outcome.final_loss < outcome.initial_loss);

    let predicted = outcome.model.predict_decisions(&test_set.groups)?;
    println!("train accuracy {:.3}", outcome.training_accuracy(&train_set)?);
    println!("test accuracy  {:.3}", accuracy(&predicted, &test_set.decisions)?);
    let top3: Vec<String> = outcome.model.predict_topk(test_set.groups[0].members(), 3)?.iter().map(|a| a.to_string()).collect();
    println!("top-3 for {:?}: {}", test_set.groups[0].members(), top3.join(", "));

    let restored = load_model(&save_model(&outcome.model))?;
    assert_eq!(restored.predict_decisions(&test_set.groups)?, predicted);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
