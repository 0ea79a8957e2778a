//! Heuristic comparison methods. None of them look at preference rankings:
//! they only see training groups and their decisions.
//!
//! - **Pop** predicts the most frequent training decision.
//! - **RTCP** guesses each member's vote as the decision of one of their
//!   training groups (Pop for unseen members) and returns the plurality
//!   winner of the guesses.
//! - **O-Sim** returns the decision of the training group sharing the most
//!   members with the query group (Pop when nothing overlaps).

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::preflib::AlternativeId;
use crate::social_choice::{argmax_set, break_tie};
use crate::synth::{Group, GroupDataset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("query group is empty")]
    EmptyGroup,
}

/// Precomputed statistics of a training set.
#[derive(Debug, Clone)]
pub struct TrainingSummary {
    decision_counts: Vec<usize>,
    /// user → (training group index, decision) for every group containing the user.
    user_groups: HashMap<usize, Vec<(usize, AlternativeId)>>,
    groups: Vec<Group>,
    decisions: Vec<AlternativeId>,
}

impl TrainingSummary {
    pub fn new(train: &GroupDataset) -> Result<Self, BaselineError> {
        if train.is_empty() {
            return Err(BaselineError::EmptyTrainingSet);
        }
        let mut decision_counts = vec![0; train.num_alternatives];
        let mut user_groups: HashMap<usize, Vec<(usize, AlternativeId)>> = HashMap::new();
        for (i, (g, &d)) in train.groups.iter().zip(&train.decisions).enumerate() {
            decision_counts[d.index()] += 1;
            for &u in g.members() {
                user_groups.entry(u).or_default().push((i, d));
            }
        }
        Ok(TrainingSummary { decision_counts, user_groups, groups: train.groups.clone(), decisions: train.decisions.clone() })
    }

    pub fn decision_counts(&self) -> &[usize] {
        &self.decision_counts
    }

    /// Training groups (with decisions) that contain `user`, in training order.
    pub fn groups_of(&self, user: usize) -> &[(usize, AlternativeId)] {
        self.user_groups.get(&user).map_or(&[], Vec::as_slice)
    }
}

pub fn pop_predict<R: Rng + ?Sized>(summary: &TrainingSummary, rng: &mut R) -> AlternativeId {
    let winners = argmax_set(&summary.decision_counts);
    AlternativeId::from_index(break_tie(&winners, rng))
}

pub fn rtcp_predict<R: Rng + ?Sized>(
    group: &Group,
    summary: &TrainingSummary,
    rng: &mut R,
) -> Result<AlternativeId, BaselineError> {
    if group.is_empty() {
        return Err(BaselineError::EmptyGroup);
    }
    let mut tally = vec![0usize; summary.decision_counts.len()];
    for &u in group.members() {
        let guess = match summary.groups_of(u) {
            [] => pop_predict(summary, rng),
            seen => seen[rng.random_range(0..seen.len())].1,
        };
        tally[guess.index()] += 1;
    }
    Ok(AlternativeId::from_index(break_tie(&argmax_set(&tally), rng)))
}

pub fn osim_predict<R: Rng + ?Sized>(
    group: &Group,
    summary: &TrainingSummary,
    rng: &mut R,
) -> Result<AlternativeId, BaselineError> {
    if group.is_empty() {
        return Err(BaselineError::EmptyGroup);
    }
    // Overlap counts for every training group that shares a member.
    let mut overlap: HashMap<usize, usize> = HashMap::new();
    for &u in group.members() {
        for &(i, _) in summary.groups_of(u) {
            *overlap.entry(i).or_default() += 1;
        }
    }
    let Some(&best) = overlap.values().max() else {
        return Ok(pop_predict(summary, rng));
    };
    let mut tied: Vec<usize> = overlap.into_iter().filter(|&(_, c)| c == best).map(|(i, _)| i).collect();
    tied.sort_unstable();
    let pick = break_tie(&tied, rng);
    debug_assert_eq!(summary.groups[pick].overlap(group), best);
    Ok(summary.decisions[pick])
}
