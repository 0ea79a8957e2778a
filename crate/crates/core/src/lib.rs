//! Group decision prediction and reverse social choice from group implicit feedback.
//!
//! The crate is organised bottom-up:
//!
//! - [`preflib`] reads ranked-ballot election files into a [`PreferenceProfile`].
//! - [`social_choice`] holds the positional scoring rules and Kendall's tau.
//! - [`synth`] turns a profile into a [`GroupDataset`] (KPG, RSG, RDG).
//! - [`tensor`] is a small reverse-mode autodiff engine with an Adam optimizer.
//! - [`model`] is the set-aggregating network that scores (group, item) pairs.
//! - [`baselines`] implements the Pop, RTCP and O-Sim heuristics.
//! - [`harness`] wires everything into repeated, seeded experiments and CSV output.
//!
//! [`standin`] generates PrefLib-format profiles with the same shape as the
//! public Irish election and Sushi datasets for use when those files are not
//! on disk.

pub mod baselines;
pub mod harness;
pub mod model;
pub mod preflib;
pub mod social_choice;
pub mod standin;
pub mod synth;
pub mod tensor;

mod rng;

pub use preflib::{AlternativeId, PreferenceProfile, Ranking};
pub use rng::{derive_seed, seeded_rng, stream_rng, Rng64};
pub use social_choice::DecisionRule;
pub use synth::{Group, GroupDataset, SynthConfig, SynthMethod};
