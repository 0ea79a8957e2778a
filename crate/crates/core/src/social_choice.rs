//! Positional scoring rules and rank correlation.
//!
//! Partial (top-t) ballots give unranked alternatives a score of zero under
//! both rules, and Kendall's tau treats them as tied just below the last
//! ranked position.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::preflib::{AlternativeId, Ranking};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SocialChoiceError {
    #[error("alternative {id} out of range 1..={m}")]
    OutOfRange { id: usize, m: usize },
    #[error("no ballots to aggregate")]
    NoMembers,
    #[error("ballots disagree on the number of alternatives ({0} vs {1})")]
    MismatchedBallots(usize, usize),
    #[error("Kendall tau is undefined: every pair is tied in one ranking")]
    UndefinedTau,
    #[error("unknown decision rule {0:?}")]
    UnknownRule(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecisionRule {
    Borda,
    Plurality,
    /// Borda or plurality, chosen per group by a fair coin.
    MixtureBordaPlurality,
}

impl DecisionRule {
    /// Resolves a mixture to one concrete rule; concrete rules are returned as-is.
    pub fn resolve<R: Rng + ?Sized>(self, rng: &mut R) -> DecisionRule {
        match self {
            DecisionRule::MixtureBordaPlurality => {
                if rng.random_bool(0.5) {
                    DecisionRule::Borda
                } else {
                    DecisionRule::Plurality
                }
            }
            concrete => concrete,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DecisionRule::Borda => "borda",
            DecisionRule::Plurality => "plurality",
            DecisionRule::MixtureBordaPlurality => "mixture",
        }
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecisionRule {
    type Err = SocialChoiceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "borda" => Ok(DecisionRule::Borda),
            "plurality" => Ok(DecisionRule::Plurality),
            "mixture" | "mix" | "borda+plurality" => Ok(DecisionRule::MixtureBordaPlurality),
            other => Err(SocialChoiceError::UnknownRule(other.to_string())),
        }
    }
}

fn check_range(ranking: &Ranking, alternative: AlternativeId) -> Result<(), SocialChoiceError> {
    let m = ranking.total_alternatives();
    if alternative.get() > m {
        return Err(SocialChoiceError::OutOfRange { id: alternative.get(), m });
    }
    Ok(())
}

/// `m - position`, or 0 for an unranked alternative.
pub fn borda_score(ranking: &Ranking, alternative: AlternativeId) -> Result<u32, SocialChoiceError> {
    check_range(ranking, alternative)?;
    let m = ranking.total_alternatives();
    Ok(ranking.position(alternative).map_or(0, |p| (m - p) as u32))
}

pub fn plurality_score(ranking: &Ranking, alternative: AlternativeId) -> Result<u32, SocialChoiceError> {
    check_range(ranking, alternative)?;
    Ok(u32::from(ranking.top() == alternative))
}

/// Per-alternative cumulative scores (indexed by zero-based id) under a
/// concrete rule. A mixture rule must be resolved first.
pub fn cumulative_scores(members: &[&Ranking], rule: DecisionRule) -> Result<Vec<u32>, SocialChoiceError> {
    let first = members.first().ok_or(SocialChoiceError::NoMembers)?;
    let m = first.total_alternatives();
    let mut scores = vec![0u32; m];
    for r in members {
        if r.total_alternatives() != m {
            return Err(SocialChoiceError::MismatchedBallots(m, r.total_alternatives()));
        }
        match rule {
            DecisionRule::Plurality => scores[r.top().index()] += 1,
            DecisionRule::Borda => {
                for (i, a) in r.entries().iter().enumerate() {
                    scores[a.index()] += (m - (i + 1)) as u32;
                }
            }
            DecisionRule::MixtureBordaPlurality => {
                panic!("cumulative_scores needs a concrete rule; call DecisionRule::resolve first")
            }
        }
    }
    Ok(scores)
}

/// All alternatives attaining the maximum of `scores`, ascending.
pub fn argmax_set<T: Ord + Copy>(scores: &[T]) -> Vec<usize> {
    let Some(&best) = scores.iter().max() else {
        return Vec::new();
    };
    scores.iter().enumerate().filter(|(_, &s)| s == best).map(|(i, _)| i).collect()
}

/// Uniform pick from `candidates`; draws from `rng` only when there is a tie.
pub(crate) fn break_tie<R: Rng + ?Sized>(candidates: &[usize], rng: &mut R) -> usize {
    match candidates.len() {
        1 => candidates[0],
        n => candidates[rng.random_range(0..n)],
    }
}

/// Winner of the cumulative score, ties broken uniformly at random.
pub fn group_decision<R: Rng + ?Sized>(
    members: &[&Ranking],
    rule: DecisionRule,
    rng: &mut R,
) -> Result<AlternativeId, SocialChoiceError> {
    let rule = rule.resolve(rng);
    let scores = cumulative_scores(members, rule)?;
    let winners = argmax_set(&scores);
    Ok(AlternativeId::from_index(break_tie(&winners, rng)))
}

/// Kendall's tau-b over all alternative pairs; unranked alternatives are
/// tied at position t + 1.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<f64, SocialChoiceError> {
    let m = r1.total_alternatives();
    if r2.total_alternatives() != m {
        return Err(SocialChoiceError::MismatchedBallots(m, r2.total_alternatives()));
    }
    let p1 = r1.positions_with_bottom_ties();
    let p2 = r2.positions_with_bottom_ties();
    tau_b_from_positions(&p1, &p2)
}

pub(crate) fn tau_b_from_positions(p1: &[usize], p2: &[usize]) -> Result<f64, SocialChoiceError> {
    let m = p1.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied1, mut tied2) = (0i64, 0i64);
    for a in 0..m {
        for b in a + 1..m {
            let d1 = p1[a].cmp(&p1[b]);
            let d2 = p2[a].cmp(&p2[b]);
            if d1.is_eq() {
                tied1 += 1;
            }
            if d2.is_eq() {
                tied2 += 1;
            }
            if d1.is_ne() && d2.is_ne() {
                if d1 == d2 {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
    }
    let pairs = (m * m.saturating_sub(1) / 2) as i64;
    let denom = ((pairs - tied1) as f64) * ((pairs - tied2) as f64);
    if denom <= 0.0 {
        return Err(SocialChoiceError::UndefinedTau);
    }
    Ok((concordant - discordant) as f64 / denom.sqrt())
}
