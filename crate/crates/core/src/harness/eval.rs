use rand::seq::SliceRandom;
use rand::Rng;

use super::{HarnessError, Method};
use crate::baselines::{osim_predict, pop_predict, rtcp_predict, TrainingSummary};
use crate::model::{train, DeepGroupModel, ModelConfig};
use crate::preflib::{AlternativeId, PreferenceProfile};
use crate::synth::{Group, GroupDataset};

/// Query groups with the decision each should receive.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    pub groups: Vec<Group>,
    pub truth: Vec<AlternativeId>,
}

impl TestSet {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

impl From<&GroupDataset> for TestSet {
    fn from(ds: &GroupDataset) -> Self {
        TestSet { groups: ds.groups.clone(), truth: ds.decisions.clone() }
    }
}

/// Random train/test split with `round(fraction * l)` training groups, kept
/// within `1..l` so neither side is empty.
pub fn split_dataset<R: Rng + ?Sized>(
    dataset: &GroupDataset,
    fraction: f64,
    rng: &mut R,
) -> Result<(GroupDataset, GroupDataset), HarnessError> {
    let l = dataset.len();
    if l < 2 {
        return Err(HarnessError::DegenerateSplit { train: l, test: 0 });
    }
    let n_train = ((fraction * l as f64).round() as usize).clamp(1, l - 1);
    let mut order: Vec<usize> = (0..l).collect();
    order.shuffle(rng);
    let (train, test) = order.split_at(n_train);
    Ok((dataset.subset(train), dataset.subset(test)))
}

/// Singleton groups for every user seen in training, labelled with that
/// user's first choice.
pub fn build_reverse_test(train: &GroupDataset, profile: &PreferenceProfile) -> Result<TestSet, HarnessError> {
    let users = train.distinct_users();
    if let Some(&u) = users.iter().find(|&&u| u >= profile.num_voters()) {
        return Err(HarnessError::Invalid(format!("user {u} is not in the profile")));
    }
    let truth = users.iter().map(|&u| profile.ranking(u).top()).collect();
    let groups = users.into_iter().map(Group::singleton).collect();
    Ok(TestSet { groups, truth })
}

pub fn accuracy(predicted: &[AlternativeId], truth: &[AlternativeId]) -> Result<f64, HarnessError> {
    if truth.is_empty() || predicted.len() != truth.len() {
        return Err(HarnessError::EmptyTestSet);
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// A method after seeing its training set.
#[derive(Debug, Clone)]
pub enum FittedMethod {
    DeepGroup(Box<DeepGroupModel>),
    Heuristic(Method, TrainingSummary),
}

impl FittedMethod {
    /// `model` must already carry the user and item counts and the seed.
    pub fn fit(method: Method, train_set: &GroupDataset, model: &ModelConfig) -> Result<Self, HarnessError> {
        Ok(match method {
            Method::DeepGroup => FittedMethod::DeepGroup(Box::new(train(train_set, model)?.model)),
            other => FittedMethod::Heuristic(other, TrainingSummary::new(train_set)?),
        })
    }

    pub fn predict<R: Rng + ?Sized>(&self, groups: &[Group], rng: &mut R) -> Result<Vec<AlternativeId>, HarnessError> {
        match self {
            FittedMethod::DeepGroup(model) => Ok(model.predict_decisions(groups)?),
            FittedMethod::Heuristic(method, summary) => groups
                .iter()
                .map(|g| {
                    Ok(match method {
                        Method::Pop => pop_predict(summary, rng),
                        Method::Rtcp => rtcp_predict(g, summary, rng)?,
                        Method::OSim => osim_predict(g, summary, rng)?,
                        Method::DeepGroup => unreachable!("deep model is never a heuristic"),
                    })
                })
                .collect(),
        }
    }
}

/// Fits `method` on `train_set` and returns its accuracy on `test`.
pub fn evaluate<R: Rng + ?Sized>(
    method: Method,
    train_set: &GroupDataset,
    test: &TestSet,
    model: &ModelConfig,
    rng: &mut R,
) -> Result<f64, HarnessError> {
    if test.is_empty() {
        return Err(HarnessError::EmptyTestSet);
    }
    let fitted = FittedMethod::fit(method, train_set, model)?;
    accuracy(&fitted.predict(&test.groups, rng)?, &test.truth)
}
