//! Deterministic random streams.
//!
//! All randomness in the crate flows from a single 64-bit master seed.
//! Streams are ChaCha8 generators whose seeds are derived with SplitMix64,
//! so independent components (population init, the evolution loop, each
//! cell of a comparison run) draw from non-overlapping streams while the
//! whole run stays reproducible from one integer.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere randomness is needed.
pub type Stream = ChaCha8Rng;

/// SplitMix64 finalizer; mixes a seed and a stream index into a child seed.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives stream number `index` from `master_seed`.
pub fn stream(master_seed: u64, index: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(index)))
}
