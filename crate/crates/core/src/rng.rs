use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The seeded random source used everywhere in the crate.
pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> Rng64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed that depends only on `(master, index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    stream_rng(master, index).next_u64()
}
