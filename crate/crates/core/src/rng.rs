//! Seeded random streams.
//!
//! Every repetition draws from ChaCha8 keyed by the experiment seed, on its
//! own stream selected by repetition index. Streams never overlap, so results
//! do not depend on how repetitions are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn repetition_rng(seed: u64, repetition: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repetition as u64);
    rng
}
