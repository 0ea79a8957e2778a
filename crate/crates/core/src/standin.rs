//! Synthetic profiles shaped like the public Irish election and Sushi data.
//!
//! Each profile is a mixture of Mallows models sampled with the repeated
//! insertion method. The Irish stand-ins truncate every ballot to a random
//! top-t prefix; the Sushi stand-in keeps complete rankings. Alternative and
//! voter counts match the public files, so code written against the real data
//! runs unchanged on these.

use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::preflib::{AlternativeId, PreferenceProfile, Ranking};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetShape {
    pub name: &'static str,
    pub file_name: &'static str,
    /// Name of the corresponding file in the public collection.
    pub public_name: &'static str,
    pub num_alternatives: usize,
    pub num_voters: usize,
    /// Complete rankings when true, otherwise random top-t prefixes.
    pub complete: bool,
    /// Mixture weights of the Mallows components.
    pub weights: &'static [f64],
    /// Mallows dispersion (0 = everyone on the centre, 1 = uniform).
    pub dispersion: f64,
    /// Success probability of the geometric tail of ballot lengths.
    pub truncation: f64,
    pub seed: u64,
}

pub const SUSHI: DatasetShape = DatasetShape {
    name: "sushi",
    file_name: "sushi.soc",
    public_name: "ED-00014-00000001.soc",
    num_alternatives: 10,
    num_voters: 5000,
    complete: true,
    weights: &[0.35, 0.25, 0.2, 0.12, 0.08],
    dispersion: 0.55,
    truncation: 1.0,
    seed: 0x5057_5348,
};

pub const DUBLIN_WEST: DatasetShape = DatasetShape {
    name: "dublin-west",
    file_name: "dublin_west.soi",
    public_name: "ED-00001-00000002.soi",
    num_alternatives: 9,
    num_voters: 29_989,
    complete: false,
    weights: &[0.3, 0.25, 0.2, 0.15, 0.1],
    dispersion: 0.45,
    truncation: 0.3,
    seed: 0x4457_0001,
};

pub const DUBLIN_NORTH: DatasetShape = DatasetShape {
    name: "dublin-north",
    file_name: "dublin_north.soi",
    public_name: "ED-00001-00000001.soi",
    num_alternatives: 12,
    num_voters: 43_942,
    complete: false,
    weights: &[0.28, 0.24, 0.2, 0.16, 0.12],
    dispersion: 0.45,
    truncation: 0.3,
    seed: 0x444e_0002,
};

pub const MEATH: DatasetShape = DatasetShape {
    name: "meath",
    file_name: "meath.soi",
    public_name: "ED-00001-00000003.soi",
    num_alternatives: 14,
    num_voters: 64_081,
    complete: false,
    weights: &[0.26, 0.22, 0.2, 0.17, 0.15],
    dispersion: 0.45,
    truncation: 0.3,
    seed: 0x4d45_0003,
};

pub const ALL_SHAPES: [&DatasetShape; 4] = [&SUSHI, &DUBLIN_WEST, &DUBLIN_NORTH, &MEATH];

const SUSHI_NAMES: [&str; 10] = ["ebi", "anago", "maguro", "ika", "uni", "sake", "tamago", "toro", "tekka-maki", "kappa-maki"];

/// One Mallows draw around `center` by repeated insertion.
pub fn sample_mallows<R: Rng + ?Sized>(center: &[usize], dispersion: f64, rng: &mut R) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(center.len());
    let mut weights = Vec::with_capacity(center.len());
    for (i, &item) in center.iter().enumerate() {
        // Position j in 0..=i has weight dispersion^(i - j).
        weights.clear();
        let mut w = 1.0;
        for _ in 0..=i {
            weights.push(w);
            w *= dispersion;
        }
        weights.reverse();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pos = i;
        for (j, &wj) in weights.iter().enumerate() {
            if u < wj {
                pos = j;
                break;
            }
            u -= wj;
        }
        out.insert(pos, item);
    }
    out
}

fn pick_component<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &w) in weights.iter().enumerate() {
        if u < w {
            return k;
        }
        u -= w;
    }
    weights.len() - 1
}

/// Generates the stand-in profile for `shape`.
pub fn generate(shape: &DatasetShape) -> PreferenceProfile {
    let m = shape.num_alternatives;
    let mut rng = seeded_rng(shape.seed);
    let mut centers: Vec<Vec<usize>> = Vec::with_capacity(shape.weights.len());
    for k in 0..shape.weights.len() {
        let c = if k == 1 {
            // An opposing bloc, so strongly anti-correlated voters exist.
            centers[0].iter().rev().copied().collect()
        } else {
            let mut c: Vec<usize> = (1..=m).collect();
            c.shuffle(&mut rng);
            c
        };
        centers.push(c);
    }
    let voters = (0..shape.num_voters)
        .map(|_| {
            let k = pick_component(shape.weights, &mut rng);
            let mut ballot = sample_mallows(&centers[k], shape.dispersion, &mut rng);
            if !shape.complete {
                let mut t = 1;
                while t < m && rng.random::<f64>() >= shape.truncation {
                    t += 1;
                }
                ballot.truncate(t);
            }
            Ranking::new(ballot.into_iter().map(AlternativeId::new).collect(), m).expect("valid permutation prefix")
        })
        .collect();
    let names = if shape.num_alternatives == SUSHI_NAMES.len() && shape.complete {
        SUSHI_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        (1..=m).map(|i| format!("Candidate {i}")).collect()
    };
    PreferenceProfile::new(names, voters).expect("non-empty profile")
}

/// Election-file text with identical ballots merged, most frequent first.
pub fn to_aggregated_preflib(profile: &PreferenceProfile, title: &str) -> String {
    let mut counts: HashMap<&Ranking, usize> = HashMap::new();
    for r in profile.voters() {
        *counts.entry(r).or_default() += 1;
    }
    let mut unique: Vec<(&Ranking, usize)> = counts.into_iter().collect();
    unique.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.entries().cmp(b.0.entries())));
    let mut out = format!("# FILE NAME: {title}\n# DATA TYPE: synthetic stand-in\n");
    out.push_str(&format!("{}\n", profile.num_alternatives()));
    for (i, name) in profile.alternative_names().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, name));
    }
    out.push_str(&format!("{},{},{}\n", profile.num_voters(), profile.num_voters(), unique.len()));
    for (r, c) in unique {
        let ids: Vec<String> = r.entries().iter().map(|a| a.to_string()).collect();
        out.push_str(&format!("{c},{}\n", ids.join(",")));
    }
    out
}

/// Directory holding the real files, under either their public or short name.
pub const DATA_DIR_ENV: &str = "DEEPGROUP_DATA_DIR";

/// The real file for `shape` when [`DATA_DIR_ENV`] points at one.
pub fn real_file(shape: &DatasetShape) -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os(DATA_DIR_ENV)?);
    [shape.public_name, shape.file_name].iter().map(|n| dir.join(n)).find(|p| p.is_file())
}

/// The real file if available, otherwise the stand-in written into
/// `fallback_dir`. The flag tells which one was returned.
pub fn resolve_file(shape: &DatasetShape, fallback_dir: &Path) -> io::Result<(PathBuf, bool)> {
    match real_file(shape) {
        Some(p) => Ok((p, true)),
        None => Ok((ensure_file(fallback_dir, shape)?, false)),
    }
}

/// Writes the stand-in file for `shape` into `dir` unless it already exists.
pub fn ensure_file(dir: &Path, shape: &DatasetShape) -> io::Result<PathBuf> {
    let path = dir.join(shape.file_name);
    if !path.exists() {
        std::fs::create_dir_all(dir)?;
        let text = to_aggregated_preflib(&generate(shape), shape.file_name);
        std::fs::write(&path, text)?;
    }
    Ok(path)
}
