//! Seeded random streams.
//!
//! Every work item gets its own ChaCha stream derived from `(seed, index)`,
//! so results do not depend on scheduling or on how many items run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// The root stream for `seed`.
pub fn root(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `index` of `seed`.
pub fn substream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}
