//! Seeded random streams.
//!
//! Every randomized operation takes an explicit `u64` seed. Independent
//! decisions inside one run (uniform edge draws, mixture coins, proposal draws,
//! clustering restarts) read from separate ChaCha8 streams of the same key so
//! that forcing one decision never shifts the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream ids used by the samplers.
pub mod streams {
    pub const UNIFORM_EDGES: u64 = 0;
    pub const COIN: u64 = 1;
    pub const PROPOSAL: u64 = 2;
    pub const CLUSTERING: u64 = 3;
    pub const DATA: u64 = 4;
    pub const CUT_SAMPLES: u64 = 5;
}

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer, used to derive child seeds (per restart, per epoch).
pub fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
