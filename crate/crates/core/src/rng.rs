//! Seedable, portable RNG used by every sampling routine.
//!
//! Streams are derived from a base seed plus a small tuple of stream ids
//! (frame, object, ...) so that per-item work is reproducible regardless of
//! evaluation order or thread count.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Identifier stored alongside sampled outputs.
pub const RNG_ALGORITHM: &str = "xoshiro256++/splitmix64";

pub type SampleRng = Xoshiro256PlusPlus;

/// Seeds through SplitMix64 expansion of the 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SampleRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes stream ids into `seed`. Distinct id tuples give unrelated seeds.
pub fn derive_seed(seed: u64, stream: &[u64]) -> u64 {
    stream
        .iter()
        .fold(splitmix64(seed), |acc, &id| splitmix64(acc ^ splitmix64(id)))
}

pub fn stream_rng(seed: u64, stream: &[u64]) -> SampleRng {
    rng_from_seed(derive_seed(seed, stream))
}
