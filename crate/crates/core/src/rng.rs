//! Counter-based random streams.
//!
//! Every Monte Carlo draw, permutation or simulated replicate `i` gets its own
//! ChaCha stream keyed by `(seed, i)`, so results never depend on how work is
//! split between workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// The generator for draw `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
