//! Seeded RNG streams. Substream `i` of a seed is an independent ChaCha
//! stream, so parallel stages can draw without coordination and results
//! stay identical for a fixed seed regardless of scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Root stream for a seed.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Substream `i` of a seed.
pub fn substream(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}
