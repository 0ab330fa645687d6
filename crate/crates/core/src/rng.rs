//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` keyed by a child seed
//! derived from the user seed and a stream index with the SplitMix64
//! finaliser: `child(seed, i) = mix(seed + (i + 1) * 0x9E3779B97F4A7C15)`.
//! Work split into fixed-size chunks therefore produces the same output no
//! matter how many threads execute it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child_seed(seed: u64, stream: u64) -> u64 {
    mix(seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(seed, index))
}
