//! Counter-based stream splitting for reproducible parallel Monte Carlo.
//!
//! Every replication derives its generator purely from
//! `(master_seed, replication_index)`, so aggregated results do not depend
//! on scheduling, worker count, or iteration order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one replication of a Monte Carlo experiment.
pub fn replication_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}
