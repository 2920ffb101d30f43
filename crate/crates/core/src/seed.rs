//! Seeding contract: one 64-bit master seed per run, per-trial seeds
//! derived through a fixed mixing function.
//!
//! The mixer is SplitMix64 applied to `master XOR (index * GOLDEN)`,
//! where GOLDEN is the 64-bit golden-ratio constant. Trials are thus
//! mutually independent streams, and any parallel schedule that maps
//! trial `i` to `trial_seed(master, i)` reproduces the serial run
//! bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under master seed `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_mul(GOLDEN))
}

/// Deterministic generator for one trial.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// Generator directly from a seed (used where a single stream suffices).
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
