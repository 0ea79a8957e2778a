//! Group-set synthesis from a preference profile.
//!
//! Three generators are provided:
//!
//! - **KPG** (κ-participation groups): κ independent random partitions of the
//!   users into subsets with sizes in `[s_min, s_max]`; the union of unique
//!   subsets is returned.
//! - **RSG** (random similar groups): rejection sampling of groups whose
//!   members all have pairwise Kendall tau `>= tau_sim`.
//! - **RDG** (random dissimilar groups): as RSG with pairwise tau `<= tau_dis`.
//!
//! [`assign_decisions`] then applies a decision rule to each group, giving one
//! decided alternative per group (one row of the group-item matrix).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::preflib::{AlternativeId, PreferenceProfile};
use crate::social_choice::{self, tau_b_from_positions, DecisionRule, SocialChoiceError};

/// Consecutive rejections after which RSG/RDG give up.
pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("cannot form groups of at least {s_min} from {n} users")]
    TooFewUsers { n: usize, s_min: usize },
    #[error("{n} users cannot be partitioned into groups of size {s_min}..={s_max}")]
    InfeasiblePartition { n: usize, s_min: usize, s_max: usize },
    #[error("invalid size bounds: s_min={s_min}, s_max={s_max}")]
    BadBounds { s_min: usize, s_max: usize },
    #[error("{method} gave up after {budget} consecutive rejections with {accepted} of {target} groups accepted")]
    RejectionBudgetExhausted { method: SynthMethod, budget: usize, accepted: usize, target: usize },
    #[error("synthesis method {0} does not apply here")]
    WrongMethod(SynthMethod),
    #[error("user {user} is not in the profile ({n} users)")]
    UnknownUser { user: usize, n: usize },
    #[error(transparent)]
    SocialChoice(#[from] SocialChoiceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthMethod {
    Kpg,
    Rsg,
    Rdg,
}

impl SynthMethod {
    pub fn name(self) -> &'static str {
        match self {
            SynthMethod::Kpg => "KPG",
            SynthMethod::Rsg => "RSG",
            SynthMethod::Rdg => "RDG",
        }
    }
}

impl fmt::Display for SynthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "KPG" => Ok(SynthMethod::Kpg),
            "RSG" => Ok(SynthMethod::Rsg),
            "RDG" => Ok(SynthMethod::Rdg),
            other => Err(format!("unknown synthesis method {other:?}")),
        }
    }
}

/// A set of users, stored sorted ascending without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group {
    members: Vec<usize>,
}

impl Group {
    /// Sorts and de-duplicates `members`. Returns `None` when empty.
    pub fn new(mut members: Vec<usize>) -> Option<Self> {
        members.sort_unstable();
        members.dedup();
        (!members.is_empty()).then_some(Group { members })
    }

    pub fn singleton(user: usize) -> Self {
        Group { members: vec![user] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, user: usize) -> bool {
        self.members.binary_search(&user).is_ok()
    }

    /// Number of common members; both sides are sorted.
    pub fn overlap(&self, other: &Group) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub method: SynthMethod,
    /// Number of partitions (KPG).
    pub kappa: usize,
    /// Target number of groups (RSG/RDG).
    pub l: usize,
    pub s_min: usize,
    pub s_max: usize,
    pub tau_sim: f64,
    pub tau_dis: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { method: SynthMethod::Kpg, kappa: 5, l: 1000, s_min: 2, s_max: 10, tau_sim: 0.5, tau_dis: -0.5, seed: 0 }
    }
}

impl SynthConfig {
    fn check_bounds(&self) -> Result<(), SynthError> {
        if self.s_min < 1 || self.s_min > self.s_max {
            return Err(SynthError::BadBounds { s_min: self.s_min, s_max: self.s_max });
        }
        Ok(())
    }
}

/// Groups with one decided alternative each. `decisions[i]` is the single
/// positive column of row `i` of the group-item matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDataset {
    pub groups: Vec<Group>,
    pub decisions: Vec<AlternativeId>,
    /// Concrete rule applied to each group (Borda or plurality).
    pub rules_used: Vec<DecisionRule>,
    pub num_alternatives: usize,
    pub method: Option<SynthMethod>,
    pub rule: DecisionRule,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DatasetFormatError {
    pub line: usize,
    pub message: String,
}

impl GroupDataset {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Number of distinct users referenced by any group.
    pub fn distinct_users(&self) -> Vec<usize> {
        let mut users: Vec<usize> = self.groups.iter().flat_map(|g| g.members().iter().copied()).collect();
        users.sort_unstable();
        users.dedup();
        users
    }

    /// Rows `indices` of this dataset, keeping the header fields.
    pub fn subset(&self, indices: &[usize]) -> GroupDataset {
        GroupDataset {
            groups: indices.iter().map(|&i| self.groups[i].clone()).collect(),
            decisions: indices.iter().map(|&i| self.decisions[i]).collect(),
            rules_used: indices.iter().map(|&i| self.rules_used[i]).collect(),
            ..self.header_only()
        }
    }

    fn header_only(&self) -> GroupDataset {
        GroupDataset {
            groups: Vec::new(),
            decisions: Vec::new(),
            rules_used: Vec::new(),
            num_alternatives: self.num_alternatives,
            method: self.method,
            rule: self.rule,
            seed: self.seed,
        }
    }

    /// Line format: header `l m method rule seed`, then one
    /// `member,member,... -> decision` line per group. Under the mixture rule
    /// each line also carries the rule that decided it (`@borda`/`@plurality`).
    pub fn to_text(&self) -> String {
        let method = self.method.map_or("-", SynthMethod::name);
        let mut out = format!("{} {} {} {} {}\n", self.len(), self.num_alternatives, method, self.rule, self.seed);
        for ((g, d), r) in self.groups.iter().zip(&self.decisions).zip(&self.rules_used) {
            let members: Vec<String> = g.members().iter().map(usize::to_string).collect();
            out.push_str(&members.join(","));
            out.push_str(" -> ");
            out.push_str(&d.to_string());
            if self.rule == DecisionRule::MixtureBordaPlurality {
                out.push_str(" @");
                out.push_str(r.name());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, DatasetFormatError> {
        let err = |line: usize, message: String| DatasetFormatError { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(1, format!("expected header \"l m method rule seed\", got {header:?}")));
        }
        let l: usize = fields[0].parse().map_err(|_| err(1, format!("bad group count {:?}", fields[0])))?;
        let m: usize = fields[1].parse().map_err(|_| err(1, format!("bad alternative count {:?}", fields[1])))?;
        if m == 0 || m > u16::MAX as usize {
            return Err(err(1, format!("alternative count {m} out of range")));
        }
        let method = match fields[2] {
            "-" => None,
            s => Some(s.parse::<SynthMethod>().map_err(|e| err(1, e))?),
        };
        let rule: DecisionRule = fields[3].parse().map_err(|e: SocialChoiceError| err(1, e.to_string()))?;
        let seed: u64 = fields[4].parse().map_err(|_| err(1, format!("bad seed {:?}", fields[4])))?;

        let mut ds = GroupDataset {
            groups: Vec::with_capacity(l),
            decisions: Vec::with_capacity(l),
            rules_used: Vec::with_capacity(l),
            num_alternatives: m,
            method,
            rule,
            seed,
        };
        let mut seen = HashSet::new();
        for (line, text) in lines {
            if text.trim().is_empty() {
                continue;
            }
            let (members, rest) = text.split_once("->").ok_or_else(|| err(line, "expected \"members -> decision\"".into()))?;
            let mut ids = Vec::new();
            for f in members.trim().split(',') {
                ids.push(f.trim().parse::<usize>().map_err(|_| err(line, format!("bad member id {f:?}")))?);
            }
            let n_ids = ids.len();
            let group = Group::new(ids).ok_or_else(|| err(line, "empty group".into()))?;
            if group.len() != n_ids {
                return Err(err(line, "duplicate member".into()));
            }
            let mut rest = rest.split_whitespace();
            let decision: usize = rest.next().and_then(|d| d.parse().ok()).ok_or_else(|| err(line, "missing decision".into()))?;
            if decision == 0 || decision > m {
                return Err(err(line, format!("decision {decision} out of range 1..={m}")));
            }
            let used = match (rule, rest.next()) {
                (DecisionRule::MixtureBordaPlurality, Some(tag)) => tag
                    .strip_prefix('@')
                    .and_then(|t| t.parse::<DecisionRule>().ok())
                    .filter(|r| *r != DecisionRule::MixtureBordaPlurality)
                    .ok_or_else(|| err(line, format!("bad rule tag {tag:?}")))?,
                (DecisionRule::MixtureBordaPlurality, None) => return Err(err(line, "missing rule tag".into())),
                (fixed, None) => fixed,
                (_, Some(extra)) => return Err(err(line, format!("unexpected trailing field {extra:?}"))),
            };
            if !seen.insert(group.clone()) {
                return Err(err(line, "duplicate group".into()));
            }
            ds.groups.push(group);
            ds.decisions.push(AlternativeId::new(decision));
            ds.rules_used.push(used);
        }
        if ds.len() != l {
            return Err(err(1, format!("header declares {l} groups, found {}", ds.len())));
        }
        Ok(ds)
    }
}

/// One random partition of `users` into chunks of size `[s_min, s_max]`.
fn partition<R: Rng + ?Sized>(
    users: &mut [usize],
    s_min: usize,
    s_max: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>, SynthError> {
    let n = users.len();
    if n < s_min {
        return Err(SynthError::TooFewUsers { n, s_min });
    }
    users.shuffle(rng);
    let mut chunks: Vec<Vec<usize>> = Vec::new();
    let mut pos = 0;
    while pos < n {
        let size = rng.random_range(s_min..=s_max).min(n - pos);
        chunks.push(users[pos..pos + size].to_vec());
        pos += size;
    }
    if chunks.last().is_some_and(|c| c.len() < s_min) {
        // chunks.len() >= 2 here because n >= s_min.
        let full = chunks.len() - 1;
        if n <= full * s_max {
            // Merge the remainder into the previous chunk and push any
            // overflow back into earlier chunks with room.
            let rest = chunks.pop().unwrap_or_default();
            let last = full - 1;
            chunks[last].extend(rest);
            while chunks[last].len() > s_max {
                let target = (0..last).rev().find(|&i| chunks[i].len() < s_max).expect("total room checked above");
                let moved = chunks[last].pop().unwrap_or_default();
                chunks[target].push(moved);
            }
        } else if n >= (full + 1) * s_min {
            // No room to absorb the remainder: grow it from chunks above s_min.
            while chunks[full].len() < s_min {
                let donor = (0..full).rev().find(|&i| chunks[i].len() > s_min).expect("total surplus checked above");
                let moved = chunks[donor].pop().unwrap_or_default();
                chunks[full].push(moved);
            }
        } else {
            return Err(SynthError::InfeasiblePartition { n, s_min, s_max });
        }
    }
    Ok(chunks)
}

/// κ-participation groups over all users of `profile`.
pub fn kpg_generate<R: Rng + ?Sized>(
    profile: &PreferenceProfile,
    config: &SynthConfig,
    rng: &mut R,
) -> Result<Vec<Group>, SynthError> {
    if config.method != SynthMethod::Kpg {
        return Err(SynthError::WrongMethod(config.method));
    }
    config.check_bounds()?;
    let mut users: Vec<usize> = (0..profile.num_voters()).collect();
    let mut seen = HashSet::new();
    let mut groups = Vec::new();
    for _ in 0..config.kappa {
        for chunk in partition(&mut users, config.s_min, config.s_max, rng)? {
            let g = Group::new(chunk).expect("partition chunks are non-empty");
            if seen.insert(g.clone()) {
                groups.push(g);
            }
        }
    }
    Ok(groups)
}

/// Rejection-sampled homophilic (RSG) or heterophilic (RDG) groups.
pub fn rsg_rdg_generate<R: Rng + ?Sized>(
    profile: &PreferenceProfile,
    config: &SynthConfig,
    rng: &mut R,
) -> Result<Vec<Group>, SynthError> {
    let accept: Box<dyn Fn(f64) -> bool> = match config.method {
        SynthMethod::Rsg => {
            let t = config.tau_sim;
            Box::new(move |tau| tau >= t)
        }
        SynthMethod::Rdg => {
            let t = config.tau_dis;
            Box::new(move |tau| tau <= t)
        }
        SynthMethod::Kpg => return Err(SynthError::WrongMethod(SynthMethod::Kpg)),
    };
    config.check_bounds()?;
    let n = profile.num_voters();
    if n < config.s_min {
        return Err(SynthError::TooFewUsers { n, s_min: config.s_min });
    }
    let positions: Vec<Vec<usize>> = profile.voters().iter().map(|r| r.positions_with_bottom_ties()).collect();
    let pair_ok = |a: usize, b: usize| tau_b_from_positions(&positions[a], &positions[b]).is_ok_and(&accept);

    let mut seen = HashSet::new();
    let mut groups = Vec::with_capacity(config.l);
    let mut rejections = 0;
    while groups.len() < config.l {
        let size = rng.random_range(config.s_min..=config.s_max);
        let accepted = size <= n && {
            let members = index::sample(rng, n, size).into_vec();
            let ok = (0..size).all(|i| (i + 1..size).all(|j| pair_ok(members[i], members[j])));
            ok && {
                let g = Group::new(members).expect("size >= 1");
                let fresh = seen.insert(g.clone());
                if fresh {
                    groups.push(g);
                }
                fresh
            }
        };
        if accepted {
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= REJECTION_BUDGET {
                return Err(SynthError::RejectionBudgetExhausted {
                    method: config.method,
                    budget: REJECTION_BUDGET,
                    accepted: groups.len(),
                    target: config.l,
                });
            }
        }
    }
    Ok(groups)
}

/// Applies `rule` to every group. Under the mixture rule each group flips its
/// own fair coin between Borda and plurality.
pub fn assign_decisions<R: Rng + ?Sized>(
    groups: Vec<Group>,
    profile: &PreferenceProfile,
    rule: DecisionRule,
    rng: &mut R,
) -> Result<GroupDataset, SynthError> {
    let n = profile.num_voters();
    let mut decisions = Vec::with_capacity(groups.len());
    let mut rules_used = Vec::with_capacity(groups.len());
    for g in &groups {
        if let Some(&user) = g.members().iter().find(|&&u| u >= n) {
            return Err(SynthError::UnknownUser { user, n });
        }
        let used = rule.resolve(rng);
        let ballots: Vec<_> = g.members().iter().map(|&u| profile.ranking(u)).collect();
        decisions.push(social_choice::group_decision(&ballots, used, rng)?);
        rules_used.push(used);
    }
    Ok(GroupDataset { groups, decisions, rules_used, num_alternatives: profile.num_alternatives(), method: None, rule, seed: 0 })
}

/// Generates groups with `config` and decides them with `rule`, drawing all
/// randomness from one generator seeded by `config.seed`.
pub fn synthesize(profile: &PreferenceProfile, config: &SynthConfig, rule: DecisionRule) -> Result<GroupDataset, SynthError> {
    let mut rng = crate::rng::seeded_rng(config.seed);
    let groups = match config.method {
        SynthMethod::Kpg => kpg_generate(profile, config, &mut rng)?,
        SynthMethod::Rsg | SynthMethod::Rdg => rsg_rdg_generate(profile, config, &mut rng)?,
    };
    let mut ds = assign_decisions(groups, profile, rule, &mut rng)?;
    ds.method = Some(config.method);
    ds.seed = config.seed;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preflib::Ranking;
    use crate::rng::seeded_rng;

    fn profile(ballots: &[&[usize]], m: usize) -> PreferenceProfile {
        let names = (1..=m).map(|i| format!("a{i}")).collect();
        let voters = ballots.iter().map(|b| Ranking::from_ids(b, m).unwrap()).collect();
        PreferenceProfile::new(names, voters).unwrap()
    }

    fn uniform_profile(n: usize, m: usize, seed: u64) -> PreferenceProfile {
        let mut rng = seeded_rng(seed);
        let names = (1..=m).map(|i| format!("a{i}")).collect();
        let voters = (0..n)
            .map(|_| {
                let mut ids: Vec<usize> = (1..=m).collect();
                ids.shuffle(&mut rng);
                Ranking::from_ids(&ids, m).unwrap()
            })
            .collect();
        PreferenceProfile::new(names, voters).unwrap()
    }

    fn kpg(kappa: usize, s_min: usize, s_max: usize) -> SynthConfig {
        SynthConfig { method: SynthMethod::Kpg, kappa, s_min, s_max, ..Default::default() }
    }

    #[test]
    fn kpg_forced_pairs() {
        let p = uniform_profile(4, 3, 0);
        let groups = kpg_generate(&p, &kpg(1, 2, 2), &mut seeded_rng(5)).unwrap();
        assert_eq!(groups.len(), 2);
        let mut all: Vec<usize> = groups.iter().flat_map(|g| g.members().to_vec()).collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn kpg_duplicates_collapse() {
        let p = uniform_profile(2, 3, 0);
        let groups = kpg_generate(&p, &kpg(2, 2, 2), &mut seeded_rng(1)).unwrap();
        assert_eq!(groups, vec![Group::new(vec![0, 1]).unwrap()]);
    }

    #[test]
    fn kpg_membership_bounded_by_kappa() {
        let p = uniform_profile(5000, 4, 2);
        let groups = kpg_generate(&p, &kpg(5, 2, 10), &mut seeded_rng(3)).unwrap();
        let mut count = vec![0usize; 5000];
        for g in &groups {
            assert!((2..=10).contains(&g.len()));
            for &u in g.members() {
                count[u] += 1;
            }
        }
        assert!(count.iter().all(|&c| (1..=5).contains(&c)));
    }

    #[test]
    fn partition_respects_bounds() {
        let mut rng = seeded_rng(11);
        for n in 2..60 {
            for (s_min, s_max) in [(2, 10), (2, 3), (3, 7), (5, 6)] {
                let mut users: Vec<usize> = (0..n).collect();
                match partition(&mut users, s_min, s_max, &mut rng) {
                    Ok(chunks) => {
                        let mut all: Vec<usize> = chunks.concat();
                        all.sort();
                        assert_eq!(all, (0..n).collect::<Vec<_>>());
                        assert!(chunks.iter().all(|c| (s_min..=s_max).contains(&c.len())), "{n} {s_min} {s_max} {chunks:?}");
                    }
                    Err(SynthError::TooFewUsers { .. }) => assert!(n < s_min),
                    Err(SynthError::InfeasiblePartition { .. }) => {
                        // Only when no split of n into [s_min, s_max] parts exists.
                        let feasible = (1..=n).any(|k| k * s_min <= n && n <= k * s_max);
                        assert!(!feasible, "{n} {s_min} {s_max}");
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn kpg_errors() {
        let p = uniform_profile(1, 3, 0);
        assert_eq!(kpg_generate(&p, &kpg(1, 2, 10), &mut seeded_rng(0)), Err(SynthError::TooFewUsers { n: 1, s_min: 2 }));
        let p = uniform_profile(5, 3, 0);
        assert!(matches!(kpg_generate(&p, &kpg(1, 2, 2), &mut seeded_rng(0)), Err(SynthError::InfeasiblePartition { .. })));
    }

    #[test]
    fn rsg_vacuous_threshold_accepts_everything() {
        let p = uniform_profile(200, 5, 4);
        let cfg = SynthConfig { method: SynthMethod::Rsg, l: 50, tau_sim: -1.0, ..Default::default() };
        let groups = rsg_rdg_generate(&p, &cfg, &mut seeded_rng(2)).unwrap();
        assert_eq!(groups.len(), 50);
        assert!(groups.iter().all(|g| (2..=10).contains(&g.len())));
    }

    #[test]
    fn rsg_and_rdg_enforce_thresholds() {
        let p = uniform_profile(400, 6, 8);
        for (method, l) in [(SynthMethod::Rsg, 40), (SynthMethod::Rdg, 40)] {
            let cfg = SynthConfig { method, l, ..Default::default() };
            let groups = rsg_rdg_generate(&p, &cfg, &mut seeded_rng(9)).unwrap();
            assert_eq!(groups.len(), l);
            for g in &groups {
                let m = g.members();
                for i in 0..m.len() {
                    for j in i + 1..m.len() {
                        let t = social_choice::kendall_tau(p.ranking(m[i]), p.ranking(m[j])).unwrap();
                        match method {
                            SynthMethod::Rsg => assert!(t >= 0.5),
                            _ => assert!(t <= -0.5),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejection_budget_is_reported() {
        // Identical complete ballots: every pair has tau = 1, so RDG never accepts.
        let p = profile(&[&[1, 2, 3], &[1, 2, 3], &[1, 2, 3]], 3);
        let cfg = SynthConfig { method: SynthMethod::Rdg, l: 1, s_max: 3, ..Default::default() };
        assert!(matches!(
            rsg_rdg_generate(&p, &cfg, &mut seeded_rng(0)),
            Err(SynthError::RejectionBudgetExhausted { accepted: 0, .. })
        ));
        // Undefined tau (m = 1) rejects every draw.
        let p = profile(&[&[1], &[1]], 1);
        let cfg = SynthConfig { method: SynthMethod::Rsg, l: 1, tau_sim: -1.0, s_max: 2, ..Default::default() };
        assert!(rsg_rdg_generate(&p, &cfg, &mut seeded_rng(0)).is_err());
    }

    #[test]
    fn singleton_plurality_decisions_are_top_choices() {
        let p = uniform_profile(30, 5, 1);
        let groups: Vec<Group> = (0..30).map(Group::singleton).collect();
        let ds = assign_decisions(groups, &p, DecisionRule::Plurality, &mut seeded_rng(0)).unwrap();
        for (g, d) in ds.groups.iter().zip(&ds.decisions) {
            assert_eq!(*d, p.ranking(g.members()[0]).top());
        }
    }

    #[test]
    fn mixture_flips_a_fair_coin() {
        let p = uniform_profile(3000, 5, 1);
        let groups: Vec<Group> = (0..1000).map(|i| Group::new(vec![3 * i, 3 * i + 1, 3 * i + 2]).unwrap()).collect();
        let ds = assign_decisions(groups, &p, DecisionRule::MixtureBordaPlurality, &mut seeded_rng(4)).unwrap();
        let borda = ds.rules_used.iter().filter(|r| **r == DecisionRule::Borda).count();
        // Binomial(1000, 0.5): sd = 15.8, allow 4 sd.
        assert!((borda as i64 - 500).abs() <= 63, "{borda}");
    }

    #[test]
    fn synthesis_is_replayable_and_round_trips() {
        let p = uniform_profile(300, 6, 3);
        for rule in [DecisionRule::Plurality, DecisionRule::MixtureBordaPlurality] {
            let cfg = SynthConfig { kappa: 3, seed: 77, ..Default::default() };
            let a = synthesize(&p, &cfg, rule).unwrap();
            let b = synthesize(&p, &cfg, rule).unwrap();
            assert_eq!(a, b);
            let text = a.to_text();
            let parsed = GroupDataset::from_text(&text).unwrap();
            assert_eq!(parsed, a);
            assert_eq!(parsed.to_text(), text);
        }
    }

    #[test]
    fn dataset_text_errors() {
        assert!(GroupDataset::from_text("").is_err());
        assert!(GroupDataset::from_text("1 3 KPG plurality 0\n1,2 -> 4\n").is_err());
        assert!(GroupDataset::from_text("2 3 KPG plurality 0\n1,2 -> 1\n2,1 -> 2\n").is_err());
        assert!(GroupDataset::from_text("1 3 KPG mixture 0\n1,2 -> 1\n").is_err());
        let ok = GroupDataset::from_text("1 3 - borda 5\n4,1 -> 2\n").unwrap();
        assert_eq!(ok.groups[0].members(), [1, 4]);
        assert_eq!(ok.method, None);
    }

    #[test]
    fn overlap_counts_common_members() {
        let a = Group::new(vec![1, 3, 5, 7]).unwrap();
        let b = Group::new(vec![3, 4, 7, 9]).unwrap();
        assert_eq!(a.overlap(&b), 2);
        assert_eq!(a.overlap(&Group::singleton(2)), 0);
    }
}
