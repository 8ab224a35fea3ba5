//! Counter-based random streams.
//!
//! Every Monte Carlo sample draws from its own ChaCha stream keyed by
//! `(seed, sample_index)`; step `k` of that sample consumes the stream in
//! order. Results therefore do not depend on how samples are split across
//! worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the generator for one sample of a seeded experiment.
pub fn sample_stream(seed: u64, sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    rng
}

/// Derives an independent sub-seed, e.g. for the `k`-th batch of a run.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    // splitmix64 finaliser over the pair
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
