//! Deterministic RNG streams. All randomness flows from one 64-bit seed plus
//! stream tags, so parallel stages reproduce regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the sub-stream identified by `tags` under the master `seed`.
pub fn stream_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut s = mix(seed);
    for &t in tags {
        s = mix(s ^ t);
    }
    s
}

/// Deterministic generator for the given sub-stream.
pub fn rng_for(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, tags))
}
