//! Ranked-ballot election files.
//!
//! The layout is the numeric PrefLib election dialect:
//!
//! ```text
//! # optional comment lines, anywhere
//! 3                         number of alternatives m
//! 1,Alice                   m lines "label,name"
//! 2,Bob
//! 3,Carol
//! 5,5,2                     total voters, total vote weight, unique ballots
//! 3,2,1,3                   "multiplicity,a1,a2,...,ak" with k <= m
//! 2,3
//! ```
//!
//! Alternative labels in the header are mapped onto `1..=m` in header order.

use std::collections::HashMap;
use std::fmt;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

/// A 1-based alternative id in `1..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlternativeId(u16);

impl AlternativeId {
    /// Panics if `id` is zero or does not fit in a `u16`.
    pub fn new(id: usize) -> Self {
        assert!(id >= 1 && id <= u16::MAX as usize, "alternative id {id} out of range");
        AlternativeId(id as u16)
    }

    pub fn from_index(index: usize) -> Self {
        Self::new(index + 1)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Zero-based index.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for AlternativeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankingError {
    #[error("ranking is empty")]
    Empty,
    #[error("ranking lists {len} alternatives but only {m} exist")]
    TooLong { len: usize, m: usize },
    #[error("alternative {id} is out of range 1..={m}")]
    OutOfRange { id: usize, m: usize },
    #[error("alternative {id} appears more than once")]
    Duplicate { id: usize },
}

/// A strict top-t ranking: `entries[0]` is the most preferred alternative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    entries: Vec<AlternativeId>,
    total_alternatives: usize,
}

impl Ranking {
    pub fn new(entries: Vec<AlternativeId>, total_alternatives: usize) -> Result<Self, RankingError> {
        if entries.is_empty() {
            return Err(RankingError::Empty);
        }
        if entries.len() > total_alternatives {
            return Err(RankingError::TooLong { len: entries.len(), m: total_alternatives });
        }
        let mut seen = vec![false; total_alternatives];
        for a in &entries {
            if a.get() > total_alternatives {
                return Err(RankingError::OutOfRange { id: a.get(), m: total_alternatives });
            }
            if std::mem::replace(&mut seen[a.index()], true) {
                return Err(RankingError::Duplicate { id: a.get() });
            }
        }
        Ok(Ranking { entries, total_alternatives })
    }

    /// Convenience constructor from plain 1-based ids.
    pub fn from_ids(ids: &[usize], total_alternatives: usize) -> Result<Self, RankingError> {
        for &id in ids {
            if id == 0 || id > total_alternatives {
                return Err(RankingError::OutOfRange { id, m: total_alternatives });
            }
        }
        Self::new(ids.iter().map(|&id| AlternativeId::new(id)).collect(), total_alternatives)
    }

    pub fn entries(&self) -> &[AlternativeId] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.len() == self.total_alternatives
    }

    pub fn total_alternatives(&self) -> usize {
        self.total_alternatives
    }

    pub fn top(&self) -> AlternativeId {
        self.entries[0]
    }

    /// 1-based position of `alternative`, or `None` when it is unranked.
    pub fn position(&self, alternative: AlternativeId) -> Option<usize> {
        self.entries.iter().position(|&a| a == alternative).map(|p| p + 1)
    }

    /// Position of every alternative indexed by zero-based id; unranked
    /// alternatives share position `t + 1`.
    pub fn positions_with_bottom_ties(&self) -> Vec<usize> {
        let mut pos = vec![self.entries.len() + 1; self.total_alternatives];
        for (i, a) in self.entries.iter().enumerate() {
            pos[a.index()] = i + 1;
        }
        pos
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile has no voters")]
    NoVoters,
    #[error("voter {voter} ranks over {found} alternatives, expected {expected}")]
    AlternativeCount { voter: usize, found: usize, expected: usize },
    #[error("expected {expected} alternative names, got {found}")]
    NameCount { expected: usize, found: usize },
    #[error("cannot sample {requested} users from a profile of {available}")]
    SampleTooLarge { requested: usize, available: usize },
}

/// The users (one ranking each) and alternatives of an election.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    num_alternatives: usize,
    alternative_names: Vec<String>,
    voters: Vec<Ranking>,
}

impl PreferenceProfile {
    pub fn new(alternative_names: Vec<String>, voters: Vec<Ranking>) -> Result<Self, ProfileError> {
        let m = alternative_names.len();
        if voters.is_empty() {
            return Err(ProfileError::NoVoters);
        }
        for (voter, r) in voters.iter().enumerate() {
            if r.total_alternatives() != m {
                return Err(ProfileError::AlternativeCount { voter, found: r.total_alternatives(), expected: m });
            }
        }
        Ok(PreferenceProfile { num_alternatives: m, alternative_names, voters })
    }

    pub fn num_alternatives(&self) -> usize {
        self.num_alternatives
    }

    pub fn alternative_names(&self) -> &[String] {
        &self.alternative_names
    }

    pub fn voters(&self) -> &[Ranking] {
        &self.voters
    }

    pub fn num_voters(&self) -> usize {
        self.voters.len()
    }

    pub fn ranking(&self, user: usize) -> &Ranking {
        &self.voters[user]
    }

    /// Sub-profile of `n` distinct voters drawn uniformly without replacement.
    pub fn sample_users<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Self, ProfileError> {
        if n > self.voters.len() || n == 0 {
            return Err(ProfileError::SampleTooLarge { requested: n, available: self.voters.len() });
        }
        let picked = index::sample(rng, self.voters.len(), n);
        let voters = picked.iter().map(|i| self.voters[i].clone()).collect();
        Ok(PreferenceProfile {
            num_alternatives: self.num_alternatives,
            alternative_names: self.alternative_names.clone(),
            voters,
        })
    }

    /// Renders the profile in the election-file layout. Consecutive identical
    /// ballots share one multiplicity line, so voter order survives a re-parse.
    pub fn to_preflib_string(&self) -> String {
        let mut runs: Vec<(usize, &Ranking)> = Vec::new();
        for r in &self.voters {
            match runs.last_mut() {
                Some((count, last)) if *last == r => *count += 1,
                _ => runs.push((1, r)),
            }
        }
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.num_alternatives));
        for (i, name) in self.alternative_names.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, name));
        }
        let unique: std::collections::HashSet<&Ranking> = self.voters.iter().collect();
        out.push_str(&format!("{},{},{}\n", self.voters.len(), self.voters.len(), unique.len()));
        for (count, r) in runs {
            out.push_str(&count.to_string());
            for a in r.entries() {
                out.push(',');
                out.push_str(&a.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unexpected end of file: {0}")]
    UnexpectedEof(String),
    #[error("not an integer: {0:?}")]
    NotAnInteger(String),
    #[error("multiplicity must be positive, got {0}")]
    BadMultiplicity(i64),
    #[error("unknown alternative {0}")]
    UnknownAlternative(String),
    #[error("alternative {0} ranked twice")]
    DuplicateAlternative(String),
    #[error("tied positions are not supported")]
    TiedPositions,
    #[error("ballot ranks no alternatives")]
    EmptyBallot,
    #[error("ballot ranks {len} alternatives but only {m} exist")]
    BallotTooLong { len: usize, m: usize },
    #[error("header declares {declared} voters but ballots sum to {found}")]
    VoterCountMismatch { declared: usize, found: usize },
    #[error("file declares no voters")]
    NoVoters,
}

fn parse_int(field: &str, line: usize) -> Result<i64, ParseError> {
    field.trim().parse::<i64>().map_err(|_| ParseError { line, kind: ParseErrorKind::NotAnInteger(field.trim().to_string()) })
}

/// Parses an election file into a profile with multiplicities expanded.
pub fn parse_preference_file(raw_text: &str) -> Result<PreferenceProfile, ParseError> {
    let mut lines =
        raw_text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut last_line = 0;

    let (line, first) =
        lines.next().ok_or(ParseError { line: 0, kind: ParseErrorKind::UnexpectedEof("missing alternative count".into()) })?;
    let m = parse_int(first, line)?;
    if m <= 0 || m > u16::MAX as i64 {
        return Err(ParseError { line, kind: ParseErrorKind::MalformedHeader(format!("alternative count {m}")) });
    }
    let m = m as usize;

    let mut names = Vec::with_capacity(m);
    let mut label_to_id: HashMap<String, usize> = HashMap::with_capacity(m);
    for k in 0..m {
        let (line, text) = lines.next().ok_or(ParseError {
            line: last_line,
            kind: ParseErrorKind::UnexpectedEof(format!("expected {m} alternative lines, found {k}")),
        })?;
        last_line = line;
        let (label, name) = text
            .split_once(',')
            .ok_or(ParseError { line, kind: ParseErrorKind::MalformedHeader(format!("expected \"id,name\", got {text:?}")) })?;
        let label = label.trim().to_string();
        parse_int(&label, line)?;
        if label_to_id.insert(label.clone(), k + 1).is_some() {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::MalformedHeader(format!("alternative label {label} declared twice")),
            });
        }
        names.push(name.trim().to_string());
    }

    let (count_line, counts) = lines
        .next()
        .ok_or(ParseError { line: last_line, kind: ParseErrorKind::UnexpectedEof("missing voter count line".into()) })?;
    let count_fields: Vec<&str> = counts.split(',').collect();
    if count_fields.len() != 3 {
        return Err(ParseError {
            line: count_line,
            kind: ParseErrorKind::MalformedHeader(format!("expected 3 count fields, got {}", count_fields.len())),
        });
    }
    let declared = parse_int(count_fields[0], count_line)?;
    for f in &count_fields[1..] {
        parse_int(f, count_line)?;
    }
    if declared < 0 {
        return Err(ParseError { line: count_line, kind: ParseErrorKind::MalformedHeader("negative voter count".into()) });
    }

    let mut voters = Vec::new();
    for (line, text) in lines {
        last_line = line;
        if text.contains('{') || text.contains('}') {
            return Err(ParseError { line, kind: ParseErrorKind::TiedPositions });
        }
        let mut fields = text.split(',');
        let multiplicity = parse_int(fields.next().unwrap_or(""), line)?;
        if multiplicity <= 0 {
            return Err(ParseError { line, kind: ParseErrorKind::BadMultiplicity(multiplicity) });
        }
        let mut entries = Vec::new();
        let mut seen = vec![false; m];
        for field in fields {
            let label = field.trim();
            let id = *label_to_id.get(label).ok_or_else(|| {
                let kind = match label.parse::<i64>() {
                    Ok(_) => ParseErrorKind::UnknownAlternative(label.to_string()),
                    Err(_) => ParseErrorKind::NotAnInteger(label.to_string()),
                };
                ParseError { line, kind }
            })?;
            if std::mem::replace(&mut seen[id - 1], true) {
                return Err(ParseError { line, kind: ParseErrorKind::DuplicateAlternative(label.to_string()) });
            }
            entries.push(AlternativeId::new(id));
        }
        if entries.is_empty() {
            return Err(ParseError { line, kind: ParseErrorKind::EmptyBallot });
        }
        let ranking = Ranking::new(entries, m).map_err(|e| ParseError {
            line,
            kind: match e {
                RankingError::TooLong { len, m } => ParseErrorKind::BallotTooLong { len, m },
                other => ParseErrorKind::MalformedHeader(other.to_string()),
            },
        })?;
        for _ in 0..multiplicity {
            voters.push(ranking.clone());
        }
    }

    if voters.len() != declared as usize {
        return Err(ParseError {
            line: count_line,
            kind: ParseErrorKind::VoterCountMismatch { declared: declared as usize, found: voters.len() },
        });
    }
    if voters.is_empty() {
        return Err(ParseError { line: last_line, kind: ParseErrorKind::NoVoters });
    }
    Ok(PreferenceProfile { num_alternatives: m, alternative_names: names, voters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    const SMALL: &str = "3\n1,Alice\n2,Bob\n3,Carol\n2,2,1\n2,3,1,2\n";

    fn ids(r: &Ranking) -> Vec<usize> {
        r.entries().iter().map(|a| a.get()).collect()
    }

    #[test]
    fn multiplicity_is_expanded() {
        let p = parse_preference_file(SMALL).unwrap();
        assert_eq!(p.num_alternatives(), 3);
        assert_eq!(p.alternative_names(), ["Alice", "Bob", "Carol"]);
        assert_eq!(p.num_voters(), 2);
        for v in p.voters() {
            assert_eq!(ids(v), vec![3, 1, 2]);
        }
    }

    #[test]
    fn partial_top_one_ballot() {
        let mut text = String::from("9\n");
        for i in 1..=9 {
            text.push_str(&format!("{i},C{i}\n"));
        }
        text.push_str("1,1,1\n1,2\n");
        let p = parse_preference_file(&text).unwrap();
        assert_eq!(p.num_voters(), 1);
        assert_eq!(ids(&p.voters()[0]), vec![2]);
        assert_eq!(p.voters()[0].len(), 1);
    }

    #[test]
    fn comments_are_skipped_and_labels_normalised() {
        let text = "# FILE NAME: x.soi\n# DATA TYPE: soi\n2\n10,Left\n20,Right\n# mid comment\n3,3,2\n2,20,10\n1,10\n";
        let p = parse_preference_file(text).unwrap();
        assert_eq!(p.num_voters(), 3);
        assert_eq!(ids(&p.voters()[0]), vec![2, 1]);
        assert_eq!(ids(&p.voters()[2]), vec![1]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dup = "3\n1,a\n2,b\n3,c\n1,1,1\n1,1,2,1\n";
        let err = parse_preference_file(dup).unwrap_err();
        assert_eq!(err.line, 6);
        assert_eq!(err.kind, ParseErrorKind::DuplicateAlternative("1".into()));

        let range = "3\n1,a\n2,b\n3,c\n1,1,1\n1,4\n";
        assert_eq!(parse_preference_file(range).unwrap_err().kind, ParseErrorKind::UnknownAlternative("4".into()));

        let zero = "3\n1,a\n2,b\n3,c\n0,0,1\n0,1\n";
        let err = parse_preference_file(zero).unwrap_err();
        assert_eq!((err.line, err.kind), (6, ParseErrorKind::BadMultiplicity(0)));

        let neg = "3\n1,a\n2,b\n3,c\n1,1,1\n-2,1\n";
        assert_eq!(parse_preference_file(neg).unwrap_err().kind, ParseErrorKind::BadMultiplicity(-2));

        let header = "x\n1,a\n";
        assert_eq!(parse_preference_file(header).unwrap_err().line, 1);

        let short = "3\n1,a\n2,b\n";
        assert!(matches!(parse_preference_file(short).unwrap_err().kind, ParseErrorKind::UnexpectedEof(_)));

        let tie = "3\n1,a\n2,b\n3,c\n1,1,1\n1,{1,2},3\n";
        let err = parse_preference_file(tie).unwrap_err();
        assert_eq!((err.line, err.kind), (6, ParseErrorKind::TiedPositions));

        let count = "3\n1,a\n2,b\n3,c\n5,5,1\n2,1\n";
        assert!(matches!(
            parse_preference_file(count).unwrap_err().kind,
            ParseErrorKind::VoterCountMismatch { declared: 5, found: 2 }
        ));
    }

    #[test]
    fn serialisation_round_trips() {
        let text = "3\n1,a\n2,b\n3,c\n5,5,3\n2,1,2,3\n1,3\n2,1,2,3\n";
        let p = parse_preference_file(text).unwrap();
        let again = parse_preference_file(&p.to_preflib_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn sampling_everything_is_a_permutation() {
        let text = "3\n1,a\n2,b\n3,c\n4,4,3\n1,1,2,3\n1,2\n1,3,1\n1,1\n";
        let p = parse_preference_file(text).unwrap();
        let s = p.sample_users(4, &mut seeded_rng(1)).unwrap();
        let mut a: Vec<Vec<usize>> = p.voters().iter().map(ids).collect();
        let mut b: Vec<Vec<usize>> = s.voters().iter().map(ids).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        let one = p.sample_users(1, &mut seeded_rng(2)).unwrap();
        assert_eq!(one.num_voters(), 1);
        assert!(p.voters().contains(&one.voters()[0]));

        assert_eq!(
            p.sample_users(5, &mut seeded_rng(0)).unwrap_err(),
            ProfileError::SampleTooLarge { requested: 5, available: 4 }
        );
        assert_eq!(p.sample_users(3, &mut seeded_rng(9)), p.sample_users(3, &mut seeded_rng(9)));
    }

    #[test]
    fn ranking_invariants() {
        assert_eq!(Ranking::from_ids(&[], 3), Err(RankingError::Empty));
        assert_eq!(Ranking::from_ids(&[1, 1], 3), Err(RankingError::Duplicate { id: 1 }));
        assert_eq!(Ranking::from_ids(&[4], 3), Err(RankingError::OutOfRange { id: 4, m: 3 }));
        let r = Ranking::from_ids(&[2, 3], 4).unwrap();
        assert_eq!(r.position(AlternativeId::new(3)), Some(2));
        assert_eq!(r.position(AlternativeId::new(1)), None);
        assert_eq!(r.positions_with_bottom_ties(), vec![3, 1, 2, 3]);
    }
}
