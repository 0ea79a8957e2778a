//! Model checkpoints: a `key=value` header describing the [`ModelConfig`]
//! and the trained-user set, followed by the tensor container.

use super::{Aggregator, DeepGroupModel, ModelConfig, ModelError, ModelParams};
use crate::tensor::{read_tensors, write_tensors, Tensor};

const MAGIC: &str = "deepgroup-model v1";

pub fn save_model(model: &DeepGroupModel) -> String {
    let c = &model.config;
    let hidden: Vec<String> = c.hidden_sizes.iter().map(usize::to_string).collect();
    let known: Vec<String> = (0..c.num_users).filter(|&u| model.is_known(u)).map(|u| u.to_string()).collect();
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    for (k, v) in [
        ("num_users", c.num_users.to_string()),
        ("num_items", c.num_items.to_string()),
        ("user_dim", c.user_dim.to_string()),
        ("item_dim", c.item_dim.to_string()),
        ("hidden_sizes", hidden.join(",")),
        ("aggregator", c.aggregator.to_string()),
        ("keep_prob", format!("{:?}", c.keep_prob)),
        ("learning_rate", format!("{:?}", c.learning_rate)),
        ("epochs", c.epochs.to_string()),
        ("batch_size", c.batch_size.to_string()),
        ("seed", c.seed.to_string()),
        ("known_users", known.join(",")),
    ] {
        out.push_str(&format!("{k}={v}\n"));
    }
    let names = model.params.names();
    let tensors: Vec<(String, &Tensor)> = names.into_iter().zip(model.params.tensors()).collect();
    out.push_str(&write_tensors(&tensors));
    out
}

fn field<'a>(header: &'a [(String, String)], key: &str) -> Result<&'a str, ModelError> {
    header
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| ModelError::Checkpoint(format!("missing header field {key}")))
}

fn parse<T: std::str::FromStr>(header: &[(String, String)], key: &str) -> Result<T, ModelError> {
    let v = field(header, key)?;
    v.parse().map_err(|_| ModelError::Checkpoint(format!("bad value for {key}: {v:?}")))
}

fn parse_list(v: &str) -> Result<Vec<usize>, ModelError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| s.parse().map_err(|_| ModelError::Checkpoint(format!("bad list entry {s:?}")))).collect()
}

/// Reads a checkpoint and validates every tensor shape against its header.
pub fn load_model(text: &str) -> Result<DeepGroupModel, ModelError> {
    let (header, tensors) = read_tensors(text)?;
    if header.first().map(String::as_str) != Some(MAGIC) {
        return Err(ModelError::Checkpoint("not a model checkpoint".into()));
    }
    let kv: Vec<(String, String)> = header[1..]
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| ModelError::Checkpoint(format!("bad header line {l:?}")))
        })
        .collect::<Result<_, _>>()?;
    let config = ModelConfig {
        num_users: parse(&kv, "num_users")?,
        num_items: parse(&kv, "num_items")?,
        user_dim: parse(&kv, "user_dim")?,
        item_dim: parse(&kv, "item_dim")?,
        hidden_sizes: parse_list(field(&kv, "hidden_sizes")?)?,
        aggregator: field(&kv, "aggregator")?.parse::<Aggregator>().map_err(ModelError::Checkpoint)?,
        keep_prob: parse(&kv, "keep_prob")?,
        learning_rate: parse(&kv, "learning_rate")?,
        epochs: parse(&kv, "epochs")?,
        batch_size: parse(&kv, "batch_size")?,
        seed: parse(&kv, "seed")?,
    };
    let mut known = vec![false; config.num_users];
    for u in parse_list(field(&kv, "known_users")?)? {
        *known.get_mut(u).ok_or_else(|| ModelError::Checkpoint(format!("known user {u} out of range")))? = true;
    }

    let mut params = ModelParams::zeros(&config)?;
    let names = params.names();
    if tensors.len() != names.len() {
        return Err(ModelError::Checkpoint(format!("expected {} tensors, found {}", names.len(), tensors.len())));
    }
    for ((slot, name), (found_name, t)) in params.tensors_mut().into_iter().zip(&names).zip(tensors) {
        if *name != found_name {
            return Err(ModelError::Checkpoint(format!("expected tensor {name}, found {found_name}")));
        }
        if slot.shape() != t.shape() {
            return Err(ModelError::Checkpoint(format!("{name} has shape {:?}, header implies {:?}", t.shape(), slot.shape())));
        }
        *slot = t;
    }
    DeepGroupModel::new(config, params, known)
}
