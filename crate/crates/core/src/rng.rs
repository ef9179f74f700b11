//! Seeded RNG stream derivation.
//!
//! Every source of randomness in the crate is a ChaCha stream derived from a
//! user-supplied base seed plus a salt path (purpose constant, then indices
//! such as node or trial number). Streams with different salt paths are
//! independent, which lets per-node and per-trial work run in parallel while
//! staying bit-reproducible for a fixed base seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose constants keeping stream families disjoint.
pub mod salt {
    pub const JOR: u64 = 0x01;
    pub const SAMPLE: u64 = 0x02;
    pub const INIT: u64 = 0x03;
    pub const TRAIN: u64 = 0x04;
    pub const SPLIT: u64 = 0x05;
    pub const NEGATIVE: u64 = 0x06;
    pub const EVAL: u64 = 0x07;
    pub const COMBINE: u64 = 0x08;
    pub const BRIDGE: u64 = 0x09;
    pub const REC: u64 = 0x0a;
    pub const SWEEP: u64 = 0x0b;
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix a base seed and a salt path into a single stream key.
pub fn mix(seed: u64, salts: &[u64]) -> u64 {
    let mut s = splitmix64(seed);
    for &salt in salts {
        s = splitmix64(s ^ splitmix64(salt));
    }
    s
}

/// Derive an independent RNG stream from a base seed and a salt path.
pub fn stream(seed: u64, salts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, salts))
}
