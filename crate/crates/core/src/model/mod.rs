//! The set-aggregating scorer.
//!
//! A group's member embeddings are reduced to one fixed-length vector `q`
//! (mean, max, min, median, or mean‖max‖min), concatenated with the item
//! embedding, and passed through a ReLU tower with dropout on every hidden
//! activation. A sigmoid output gives the probability that the group decides
//! on the item.

mod checkpoint;
mod train;

pub use checkpoint::{load_model, save_model};
pub use train::{train, TrainOutcome};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use thiserror::Error;

use crate::preflib::AlternativeId;
use crate::synth::Group;
use crate::tensor::{Graph, ReduceOp, Tensor, TensorError, Var};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("group is empty")]
    EmptyGroup,
    #[error("user {user} out of range ({n} users)")]
    UserOutOfRange { user: usize, n: usize },
    #[error("item {item} out of range ({m} items)")]
    ItemOutOfRange { item: usize, m: usize },
    #[error("k = {k} must lie in 1..={m}")]
    BadK { k: usize, m: usize },
    #[error("invalid model configuration: {0}")]
    Config(String),
    #[error("dataset does not fit the model: {0}")]
    DatasetMismatch(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregator {
    Mean,
    Max,
    Min,
    Median,
    MeanMaxMin,
}

impl Aggregator {
    pub const ALL: [Aggregator; 5] =
        [Aggregator::Mean, Aggregator::Max, Aggregator::Min, Aggregator::Median, Aggregator::MeanMaxMin];

    /// Length of `q` for user embeddings of dimension `user_dim`.
    pub fn output_dim(self, user_dim: usize) -> usize {
        match self {
            Aggregator::MeanMaxMin => 3 * user_dim,
            _ => user_dim,
        }
    }

    fn reductions(self) -> &'static [ReduceOp] {
        match self {
            Aggregator::Mean => &[ReduceOp::Mean],
            Aggregator::Max => &[ReduceOp::Max],
            Aggregator::Min => &[ReduceOp::Min],
            Aggregator::Median => &[ReduceOp::Median],
            Aggregator::MeanMaxMin => &[ReduceOp::Mean, ReduceOp::Max, ReduceOp::Min],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Mean => "mean",
            Aggregator::Max => "max",
            Aggregator::Min => "min",
            Aggregator::Median => "median",
            Aggregator::MeanMaxMin => "mean-max-min",
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(Aggregator::Mean),
            "max" => Ok(Aggregator::Max),
            "min" => Ok(Aggregator::Min),
            "median" => Ok(Aggregator::Median),
            "mean-max-min" | "meanmaxmin" | "mmm" => Ok(Aggregator::MeanMaxMin),
            other => Err(format!("unknown aggregator {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub num_users: usize,
    pub num_items: usize,
    pub user_dim: usize,
    pub item_dim: usize,
    pub hidden_sizes: Vec<usize>,
    pub aggregator: Aggregator,
    pub keep_prob: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl ModelConfig {
    /// Defaults from the reference experiments: 64-d embeddings, a 64-32-16-8
    /// tower, mean aggregation, keep probability 0.8, Adam at 0.001 for 100
    /// epochs with batches of 4096 records.
    pub fn new(num_users: usize, num_items: usize) -> Self {
        ModelConfig {
            num_users,
            num_items,
            user_dim: 64,
            item_dim: 64,
            hidden_sizes: vec![64, 32, 16, 8],
            aggregator: Aggregator::Mean,
            keep_prob: 0.8,
            learning_rate: 0.001,
            epochs: 100,
            batch_size: 4096,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Config(m.to_string()));
        if self.num_users == 0 || self.num_items == 0 {
            return bad("num_users and num_items must be positive");
        }
        if self.user_dim == 0 || self.item_dim == 0 {
            return bad("embedding dimensions must be positive");
        }
        if self.hidden_sizes.is_empty() || self.hidden_sizes.contains(&0) {
            return bad("hidden_sizes must be a non-empty list of positive sizes");
        }
        if !(self.keep_prob > 0.0 && self.keep_prob <= 1.0) {
            return bad("keep_prob must lie in (0, 1]");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be positive");
        }
        Ok(())
    }

    /// Width of the first hidden layer's input.
    pub fn tower_input_dim(&self) -> usize {
        self.aggregator.output_dim(self.user_dim) + self.item_dim
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    /// `[out × in]`
    pub weight: Tensor,
    /// `[out]`
    pub bias: Tensor,
}

/// All learnable parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub user_embeddings: Tensor,
    pub item_embeddings: Tensor,
    pub hidden: Vec<DenseLayer>,
    pub output: DenseLayer,
}

impl ModelParams {
    /// Glorot-uniform weights, zero biases, N(0, 0.01²) embeddings.
    pub fn init<R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> Result<Self, ModelError> {
        config.validate()?;
        let normal = Normal::new(0.0, 0.01).expect("valid std");
        let embed = |rows: usize, cols: usize, rng: &mut R| {
            let data = (0..rows * cols).map(|_| normal.sample(rng)).collect();
            Tensor::new(vec![rows, cols], data).expect("sized")
        };
        let user_embeddings = embed(config.num_users, config.user_dim, rng);
        let item_embeddings = embed(config.num_items, config.item_dim, rng);
        let dense = |fan_in: usize, fan_out: usize, rng: &mut R| {
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let dist = Uniform::new_inclusive(-limit, limit).expect("valid range");
            let data = (0..fan_in * fan_out).map(|_| dist.sample(rng)).collect();
            DenseLayer { weight: Tensor::new(vec![fan_out, fan_in], data).expect("sized"), bias: Tensor::zeros(vec![fan_out]) }
        };
        let mut fan_in = config.tower_input_dim();
        let mut hidden = Vec::with_capacity(config.hidden_sizes.len());
        for &h in &config.hidden_sizes {
            hidden.push(dense(fan_in, h, rng));
            fan_in = h;
        }
        let output = dense(fan_in, 1, rng);
        Ok(ModelParams { user_embeddings, item_embeddings, hidden, output })
    }

    /// Every parameter set to zero.
    pub fn zeros(config: &ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let mut fan_in = config.tower_input_dim();
        let mut hidden = Vec::new();
        for &h in &config.hidden_sizes {
            hidden.push(DenseLayer { weight: Tensor::zeros(vec![h, fan_in]), bias: Tensor::zeros(vec![h]) });
            fan_in = h;
        }
        Ok(ModelParams {
            user_embeddings: Tensor::zeros(vec![config.num_users, config.user_dim]),
            item_embeddings: Tensor::zeros(vec![config.num_items, config.item_dim]),
            hidden,
            output: DenseLayer { weight: Tensor::zeros(vec![1, fan_in]), bias: Tensor::zeros(vec![1]) },
        })
    }

    /// Parameters in a fixed order: users, items, each hidden layer's weight
    /// and bias, then the output weight and bias.
    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut v = vec![&self.user_embeddings, &self.item_embeddings];
        for l in &self.hidden {
            v.push(&l.weight);
            v.push(&l.bias);
        }
        v.push(&self.output.weight);
        v.push(&self.output.bias);
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut v = vec![&mut self.user_embeddings, &mut self.item_embeddings];
        for l in &mut self.hidden {
            v.push(&mut l.weight);
            v.push(&mut l.bias);
        }
        v.push(&mut self.output.weight);
        v.push(&mut self.output.bias);
        v
    }

    pub fn names(&self) -> Vec<String> {
        let mut v = vec!["user_embeddings".to_string(), "item_embeddings".to_string()];
        for i in 0..self.hidden.len() {
            v.push(format!("hidden{i}.weight"));
            v.push(format!("hidden{i}.bias"));
        }
        v.push("output.weight".into());
        v.push("output.bias".into());
        v
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.is_finite())
    }

    /// Checks every shape against `config`.
    pub fn check_shapes(&self, config: &ModelConfig) -> Result<(), ModelError> {
        let expected = ModelParams::zeros(config)?;
        for ((name, a), b) in self.names().iter().zip(self.tensors()).zip(expected.tensors()) {
            if a.shape() != b.shape() {
                return Err(ModelError::Config(format!("{name} has shape {:?}, expected {:?}", a.shape(), b.shape())));
            }
        }
        if self.hidden.len() != expected.hidden.len() {
            return Err(ModelError::Config("hidden layer count differs".into()));
        }
        Ok(())
    }
}

/// Graph handles of the parameters used in one forward pass.
pub(crate) struct ForwardPass {
    pub params: Vec<Var>,
    pub probabilities: Var,
}

/// Builds the forward graph for a batch of `(group, item)` records.
/// `groups[r]` must be sorted ascending; rows are gathered from `user_table`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn forward_batch<R: Rng + ?Sized>(
    g: &mut Graph,
    params: &ModelParams,
    config: &ModelConfig,
    user_table: &Tensor,
    groups: &[&[usize]],
    items: &[usize],
    training: bool,
    rng: &mut R,
) -> Result<ForwardPass, ModelError> {
    assert_eq!(groups.len(), items.len());
    let users = g.leaf(user_table);
    let item_table = g.leaf(&params.item_embeddings);
    let mut leaves = vec![users, item_table];

    let mut member_rows = Vec::new();
    let mut offsets = Vec::with_capacity(groups.len() + 1);
    offsets.push(0);
    let n = user_table.shape()[0];
    for members in groups {
        if members.is_empty() {
            return Err(ModelError::EmptyGroup);
        }
        if let Some(&user) = members.iter().find(|&&u| u >= n) {
            return Err(ModelError::UserOutOfRange { user, n });
        }
        member_rows.extend_from_slice(members);
        offsets.push(member_rows.len());
    }
    if let Some(&item) = items.iter().find(|&&i| i >= config.num_items) {
        return Err(ModelError::ItemOutOfRange { item, m: config.num_items });
    }
    let gathered = g.gather_rows(users, &member_rows)?;
    let parts: Vec<Var> =
        config.aggregator.reductions().iter().map(|&op| g.segment_reduce(gathered, &offsets, op)).collect::<Result<_, _>>()?;
    let item_rows = g.gather_rows(item_table, items)?;
    let mut x = if parts.len() == 1 {
        g.concat_cols(&[parts[0], item_rows])?
    } else {
        let mut all = parts;
        all.push(item_rows);
        g.concat_cols(&all)?
    };
    for layer in &params.hidden {
        let w = g.leaf(&layer.weight);
        let b = g.leaf(&layer.bias);
        leaves.push(w);
        leaves.push(b);
        let z = g.linear(x, w, b)?;
        let h = g.relu(z);
        x = g.dropout(h, config.keep_prob, training, rng)?;
    }
    let w = g.leaf(&params.output.weight);
    let b = g.leaf(&params.output.bias);
    leaves.push(w);
    leaves.push(b);
    let logit = g.linear(x, w, b)?;
    let probabilities = g.sigmoid(logit);
    Ok(ForwardPass { params: leaves, probabilities })
}

fn sorted_members(member_ids: &[usize]) -> Result<Vec<usize>, ModelError> {
    if member_ids.is_empty() {
        return Err(ModelError::EmptyGroup);
    }
    let mut m = member_ids.to_vec();
    m.sort_unstable();
    m.dedup();
    Ok(m)
}

/// Group representation `q` for `member_ids`. Members are gathered in
/// ascending id order, so any permutation of the input gives identical bits.
pub fn aggregate_group(member_ids: &[usize], params: &ModelParams, aggregator: Aggregator) -> Result<Tensor, ModelError> {
    let members = sorted_members(member_ids)?;
    let n = params.user_embeddings.shape()[0];
    if let Some(&user) = members.iter().find(|&&u| u >= n) {
        return Err(ModelError::UserOutOfRange { user, n });
    }
    let mut g = Graph::new();
    let users = g.constant(params.user_embeddings.clone());
    let rows = g.gather_rows(users, &members)?;
    let offsets = [0, members.len()];
    let parts: Vec<Var> =
        aggregator.reductions().iter().map(|&op| g.segment_reduce(rows, &offsets, op)).collect::<Result<_, _>>()?;
    let q = if parts.len() == 1 { parts[0] } else { g.concat_cols(&parts)? };
    let d = aggregator.output_dim(params.user_embeddings.shape()[1]);
    Ok(Tensor::new(vec![d], g.value(q).data().to_vec())?)
}

/// Probability that the group `member_ids` decides on zero-based `item`.
pub fn forward<R: Rng + ?Sized>(
    member_ids: &[usize],
    item: usize,
    params: &ModelParams,
    config: &ModelConfig,
    training: bool,
    rng: &mut R,
) -> Result<f64, ModelError> {
    let members = sorted_members(member_ids)?;
    let mut g = Graph::new();
    let pass = forward_batch(&mut g, params, config, &params.user_embeddings, &[&members], &[item], training, rng)?;
    Ok(g.value(pass.probabilities).data()[0])
}

/// Mean binary cross-entropy of `(group, item, target)` records and its
/// gradient with respect to every parameter tensor, in [`ModelParams::names`]
/// order. With `training` set, dropout masks come from `dropout_seed`.
#[allow(clippy::too_many_arguments)]
pub fn loss_and_gradients(
    params: &ModelParams,
    config: &ModelConfig,
    groups: &[&[usize]],
    items: &[usize],
    targets: &[f64],
    training: bool,
    dropout_seed: u64,
) -> Result<(f64, Vec<Vec<f64>>), ModelError> {
    if groups.len() != items.len() || groups.len() != targets.len() {
        return Err(ModelError::Config(format!("{} groups, {} items and {} targets", groups.len(), items.len(), targets.len())));
    }
    let sorted: Vec<Vec<usize>> = groups.iter().map(|m| sorted_members(m)).collect::<Result<_, _>>()?;
    let refs: Vec<&[usize]> = sorted.iter().map(Vec::as_slice).collect();
    let mut rng = crate::rng::seeded_rng(dropout_seed);
    let mut g = Graph::new();
    let pass = forward_batch(&mut g, params, config, &params.user_embeddings, &refs, items, training, &mut rng)?;
    let loss = g.bce_loss(pass.probabilities, &Tensor::new(vec![targets.len(), 1], targets.to_vec())?)?;
    g.backward(loss)?;
    let grads = pass
        .params
        .iter()
        .zip(params.tensors())
        .map(|(v, t)| g.grad(*v).map_or_else(|| vec![0.0; t.numel()], <[f64]>::to_vec))
        .collect();
    Ok((g.value(loss).data()[0], grads))
}

/// A trained model ready for prediction. Users that never appeared in a
/// training group are scored with the mean of the trained users' embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepGroupModel {
    pub config: ModelConfig,
    pub params: ModelParams,
    known_users: Vec<bool>,
    /// User embeddings plus one extra row holding the mean known user.
    inference_users: Tensor,
}

/// Records scored per graph during prediction.
const PREDICT_CHUNK: usize = 4096;

impl DeepGroupModel {
    pub fn new(config: ModelConfig, params: ModelParams, known_users: Vec<bool>) -> Result<Self, ModelError> {
        params.check_shapes(&config)?;
        if known_users.len() != config.num_users {
            return Err(ModelError::Config(format!("{} known-user flags for {} users", known_users.len(), config.num_users)));
        }
        let d = config.user_dim;
        let mut mean = vec![0.0; d];
        let known: Vec<usize> = (0..config.num_users).filter(|&u| known_users[u]).collect();
        for &u in &known {
            mean.iter_mut().zip(params.user_embeddings.row(u)).for_each(|(m, v)| *m += v);
        }
        if !known.is_empty() {
            mean.iter_mut().for_each(|m| *m /= known.len() as f64);
        }
        let mut table = params.user_embeddings.data().to_vec();
        table.extend_from_slice(&mean);
        let inference_users = Tensor::new(vec![config.num_users + 1, d], table)?;
        Ok(DeepGroupModel { config, params, known_users, inference_users })
    }

    pub fn known_users(&self) -> &[bool] {
        &self.known_users
    }

    pub fn is_known(&self, user: usize) -> bool {
        self.known_users.get(user).copied().unwrap_or(false)
    }

    /// Embedding of the "average" user that stands in for unseen members.
    pub fn mean_user_embedding(&self) -> &[f64] {
        self.inference_users.row(self.config.num_users)
    }

    fn resolve_members(&self, member_ids: &[usize]) -> Result<Vec<usize>, ModelError> {
        let cold = self.config.num_users;
        let mut rows: Vec<usize> =
            sorted_members(member_ids)?.into_iter().map(|u| if self.is_known(u) { u } else { cold }).collect();
        rows.sort_unstable();
        Ok(rows)
    }

    /// Probabilities for every item, one row per group, in evaluation mode.
    pub fn score_groups(&self, groups: &[&[usize]]) -> Result<Vec<Vec<f64>>, ModelError> {
        let m = self.config.num_items;
        let resolved: Vec<Vec<usize>> = groups.iter().map(|g| self.resolve_members(g)).collect::<Result<_, _>>()?;
        let mut scores = vec![Vec::with_capacity(m); groups.len()];
        let per_chunk = (PREDICT_CHUNK / m).max(1);
        let mut unused_rng = crate::rng::seeded_rng(0);
        for (c, chunk) in resolved.chunks(per_chunk).enumerate() {
            let mut batch_groups: Vec<&[usize]> = Vec::with_capacity(chunk.len() * m);
            let mut items = Vec::with_capacity(chunk.len() * m);
            for members in chunk {
                for j in 0..m {
                    batch_groups.push(members);
                    items.push(j);
                }
            }
            let mut g = Graph::new();
            let pass = forward_batch(
                &mut g,
                &self.params,
                &self.config,
                &self.inference_users,
                &batch_groups,
                &items,
                false,
                &mut unused_rng,
            )?;
            let probs = g.value(pass.probabilities).data();
            for (i, row) in probs.chunks(m).enumerate() {
                scores[c * per_chunk + i].extend_from_slice(row);
            }
        }
        Ok(scores)
    }

    /// The `k` highest-scoring items, ties broken by ascending item id.
    pub fn predict_topk(&self, member_ids: &[usize], k: usize) -> Result<Vec<AlternativeId>, ModelError> {
        let m = self.config.num_items;
        if k == 0 || k > m {
            return Err(ModelError::BadK { k, m });
        }
        let scores = self.score_groups(&[member_ids])?.remove(0);
        Ok(top_k(&scores, k))
    }

    /// Top-1 item for each group.
    pub fn predict_decisions(&self, groups: &[Group]) -> Result<Vec<AlternativeId>, ModelError> {
        let refs: Vec<&[usize]> = groups.iter().map(Group::members).collect();
        Ok(self.score_groups(&refs)?.iter().map(|s| top_k(s, 1)[0]).collect())
    }
}

/// Indices of the `k` largest scores (descending, ties to the lower index).
pub fn top_k(scores: &[f64], k: usize) -> Vec<AlternativeId> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.into_iter().take(k).map(AlternativeId::from_index).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    fn small_config(aggregator: Aggregator) -> ModelConfig {
        ModelConfig { user_dim: 4, item_dim: 3, hidden_sizes: vec![5, 3], aggregator, ..ModelConfig::new(6, 4) }
    }

    #[test]
    fn aggregator_examples() {
        let mut cfg = small_config(Aggregator::MeanMaxMin);
        cfg.user_dim = 2;
        let mut params = ModelParams::zeros(&cfg).unwrap();
        params.user_embeddings.data_mut()[..4].copy_from_slice(&[1.0, 3.0, 3.0, 5.0]);
        let q = aggregate_group(&[1, 0], &params, Aggregator::MeanMaxMin).unwrap();
        assert_eq!(q.data(), [2.0, 4.0, 3.0, 5.0, 1.0, 3.0]);

        for agg in Aggregator::ALL {
            let q = aggregate_group(&[1], &params, agg).unwrap();
            let copies = if agg == Aggregator::MeanMaxMin { 3 } else { 1 };
            assert_eq!(q.data(), [3.0, 5.0].repeat(copies));
        }
        assert_eq!(aggregate_group(&[], &params, Aggregator::Mean), Err(ModelError::EmptyGroup));
        assert_eq!(aggregate_group(&[9], &params, Aggregator::Mean), Err(ModelError::UserOutOfRange { user: 9, n: 6 }));
    }

    #[test]
    fn zero_parameters_give_one_half() {
        let cfg = small_config(Aggregator::Mean);
        let params = ModelParams::zeros(&cfg).unwrap();
        for item in 0..4 {
            let p = forward(&[0, 3], item, &params, &cfg, false, &mut seeded_rng(0)).unwrap();
            assert_eq!(p, 0.5);
        }
    }

    #[test]
    fn evaluation_mode_is_repeatable_and_in_range() {
        for agg in Aggregator::ALL {
            let cfg = small_config(agg);
            let params = ModelParams::init(&cfg, &mut seeded_rng(1)).unwrap();
            let a = forward(&[2, 4, 1], 3, &params, &cfg, false, &mut seeded_rng(1)).unwrap();
            let b = forward(&[2, 4, 1], 3, &params, &cfg, false, &mut seeded_rng(99)).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
            assert!(a > 0.0 && a < 1.0);
            let c = forward(&[1, 4, 2], 3, &params, &cfg, false, &mut seeded_rng(2)).unwrap();
            assert_eq!(a.to_bits(), c.to_bits());
        }
    }

    #[test]
    fn forward_rejects_bad_ids() {
        let cfg = small_config(Aggregator::Mean);
        let params = ModelParams::zeros(&cfg).unwrap();
        let mut rng = seeded_rng(0);
        assert_eq!(forward(&[], 0, &params, &cfg, false, &mut rng), Err(ModelError::EmptyGroup));
        assert_eq!(forward(&[6], 0, &params, &cfg, false, &mut rng), Err(ModelError::UserOutOfRange { user: 6, n: 6 }));
        assert_eq!(forward(&[0], 4, &params, &cfg, false, &mut rng), Err(ModelError::ItemOutOfRange { item: 4, m: 4 }));
    }

    #[test]
    fn topk_examples() {
        let cfg = small_config(Aggregator::Mean);
        let params = ModelParams::init(&cfg, &mut seeded_rng(4)).unwrap();
        let model = DeepGroupModel::new(cfg.clone(), params.clone(), vec![true; 6]).unwrap();
        let all = model.predict_topk(&[0, 1], 4).unwrap();
        let mut sorted: Vec<usize> = all.iter().map(|a| a.get()).collect();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3, 4]);

        let best = model.predict_topk(&[0, 1], 1).unwrap()[0];
        let scores: Vec<f64> = (0..4).map(|j| forward(&[0, 1], j, &params, &cfg, false, &mut seeded_rng(0)).unwrap()).collect();
        let argmax = (0..4).max_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a))).unwrap();
        assert_eq!(best.index(), argmax);
        assert_eq!(all[0], best);

        assert_eq!(model.predict_topk(&[0], 0), Err(ModelError::BadK { k: 0, m: 4 }));
        assert_eq!(model.predict_topk(&[0], 5), Err(ModelError::BadK { k: 5, m: 4 }));
    }

    #[test]
    fn top_k_breaks_ties_by_item_id() {
        let ids: Vec<usize> = top_k(&[0.2, 0.7, 0.7, 0.1], 4).iter().map(|a| a.get()).collect();
        assert_eq!(ids, vec![2, 3, 1, 4]);
    }

    #[test]
    fn unseen_users_use_the_mean_embedding() {
        let cfg = small_config(Aggregator::Mean);
        let params = ModelParams::init(&cfg, &mut seeded_rng(5)).unwrap();
        let known = vec![true, true, true, false, false, false];
        let model = DeepGroupModel::new(cfg.clone(), params.clone(), known).unwrap();

        let mean: Vec<f64> = (0..4).map(|c| (0..3).map(|u| params.user_embeddings.row(u)[c]).sum::<f64>() / 3.0).collect();
        assert_eq!(model.mean_user_embedding(), mean.as_slice());

        let cold_group = model.score_groups(&[&[3, 4, 5]]).unwrap();
        let single = model.score_groups(&[&[3]]).unwrap();
        for (a, b) in cold_group[0].iter().zip(&single[0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(model.predict_topk(&[3, 4, 5], 4).unwrap(), model.predict_topk(&[5], 4).unwrap());
    }

    #[test]
    fn init_shapes_follow_config() {
        for agg in Aggregator::ALL {
            let cfg = small_config(agg);
            let p = ModelParams::init(&cfg, &mut seeded_rng(0)).unwrap();
            p.check_shapes(&cfg).unwrap();
            assert_eq!(p.hidden[0].weight.shape(), [5, agg.output_dim(4) + 3]);
            assert!(p.hidden.iter().all(|l| l.bias.data().iter().all(|&b| b == 0.0)));
        }
        let mut bad = small_config(Aggregator::Mean);
        bad.hidden_sizes.clear();
        assert!(matches!(ModelParams::init(&bad, &mut seeded_rng(0)), Err(ModelError::Config(_))));
    }
}
