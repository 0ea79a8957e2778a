use rand::seq::SliceRandom;

use super::{forward_batch, DeepGroupModel, ModelConfig, ModelError, ModelParams};
use crate::rng::stream_rng;
use crate::synth::GroupDataset;
use crate::tensor::{Adam, Graph, Tensor};

const INIT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;
const DROPOUT_STREAM: u64 = 2;

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: DeepGroupModel,
    /// Mean training loss of each epoch, with dropout active.
    pub loss_trace: Vec<f64>,
    /// Evaluation-mode loss over all records before the first update.
    pub initial_loss: f64,
    /// Evaluation-mode loss over all records after the last epoch.
    pub final_loss: f64,
}

impl TrainOutcome {
    /// Fraction of training groups whose top-scored item is their decision.
    pub fn training_accuracy(&self, dataset: &GroupDataset) -> Result<f64, ModelError> {
        let predicted = self.model.predict_decisions(&dataset.groups)?;
        let hits = predicted.iter().zip(&dataset.decisions).filter(|(p, d)| p == d).count();
        Ok(hits as f64 / dataset.len().max(1) as f64)
    }
}

/// One `(group, item, label)` row of the group-item matrix.
#[derive(Debug, Clone, Copy)]
struct Record {
    group: usize,
    item: usize,
    positive: bool,
}

fn check_dataset(dataset: &GroupDataset, config: &ModelConfig) -> Result<(), ModelError> {
    if dataset.is_empty() {
        return Err(ModelError::DatasetMismatch("no groups".into()));
    }
    if dataset.num_alternatives != config.num_items {
        return Err(ModelError::DatasetMismatch(format!(
            "dataset has {} alternatives, model has {} items",
            dataset.num_alternatives, config.num_items
        )));
    }
    if let Some(user) = dataset.groups.iter().flat_map(|g| g.members()).find(|&&u| u >= config.num_users) {
        return Err(ModelError::DatasetMismatch(format!("user {user} exceeds the {} model users", config.num_users)));
    }
    Ok(())
}

fn records(dataset: &GroupDataset, m: usize) -> Vec<Record> {
    let mut out = Vec::with_capacity(dataset.len() * m);
    for (group, decision) in dataset.decisions.iter().enumerate() {
        for item in 0..m {
            out.push(Record { group, item, positive: item == decision.index() });
        }
    }
    out
}

/// Evaluation-mode mean BCE over `recs`.
fn mean_loss(params: &ModelParams, config: &ModelConfig, dataset: &GroupDataset, recs: &[Record]) -> Result<f64, ModelError> {
    let mut total = 0.0;
    let mut rng = stream_rng(config.seed, DROPOUT_STREAM);
    for batch in recs.chunks(config.batch_size) {
        let mut g = Graph::new();
        let (loss, _) = batch_loss(&mut g, params, config, dataset, batch, false, &mut rng)?;
        total += g.value(loss).data()[0] * batch.len() as f64;
    }
    Ok(total / recs.len() as f64)
}

fn batch_loss(
    g: &mut Graph,
    params: &ModelParams,
    config: &ModelConfig,
    dataset: &GroupDataset,
    batch: &[Record],
    training: bool,
    rng: &mut crate::Rng64,
) -> Result<(crate::tensor::Var, Vec<crate::tensor::Var>), ModelError> {
    let groups: Vec<&[usize]> = batch.iter().map(|r| dataset.groups[r.group].members()).collect();
    let items: Vec<usize> = batch.iter().map(|r| r.item).collect();
    let targets = Tensor::new(vec![batch.len(), 1], batch.iter().map(|r| if r.positive { 1.0 } else { 0.0 }).collect())?;
    let pass = forward_batch(g, params, config, &params.user_embeddings, &groups, &items, training, rng)?;
    let loss = g.bce_loss(pass.probabilities, &targets)?;
    Ok((loss, pass.params))
}

/// Fits the model to every (group, item) record of `dataset`: one positive
/// per group and all other items as negatives, minimising mean binary
/// cross-entropy with Adam over shuffled mini-batches.
pub fn train(dataset: &GroupDataset, config: &ModelConfig) -> Result<TrainOutcome, ModelError> {
    config.validate()?;
    check_dataset(dataset, config)?;
    let mut params = ModelParams::init(config, &mut stream_rng(config.seed, INIT_STREAM))?;
    let mut shuffle_rng = stream_rng(config.seed, SHUFFLE_STREAM);
    let mut dropout_rng = stream_rng(config.seed, DROPOUT_STREAM);
    let mut adam = Adam::new(config.learning_rate);

    let mut recs = records(dataset, config.num_items);
    let initial_loss = mean_loss(&params, config, dataset, &recs)?;
    let mut loss_trace = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        recs.shuffle(&mut shuffle_rng);
        let mut epoch_total = 0.0;
        for batch in recs.chunks(config.batch_size) {
            let mut g = Graph::new();
            let (loss, leaves) = batch_loss(&mut g, &params, config, dataset, batch, true, &mut dropout_rng)?;
            g.backward(loss)?;
            epoch_total += g.value(loss).data()[0] * batch.len() as f64;
            let mut tensors = params.tensors_mut();
            for (t, v) in tensors.iter_mut().zip(&leaves) {
                let grad = g.grad(*v).map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; t.numel()]);
                t.set_grad(Some(grad))?;
            }
            adam.step(&mut tensors)?;
        }
        loss_trace.push(epoch_total / recs.len() as f64);
    }
    let final_loss = mean_loss(&params, config, dataset, &recs)?;

    let mut known = vec![false; config.num_users];
    for g in &dataset.groups {
        for &u in g.members() {
            known[u] = true;
        }
    }
    let model = DeepGroupModel::new(config.clone(), params, known)?;
    Ok(TrainOutcome { model, loss_trace, initial_loss, final_loss })
}
