//! Seeded randomness and low-discrepancy sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// The crate's PRNG: identical seeds give identical streams on every platform.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child seed for shard `stream` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Additive golden-ratio sequence in `[0, 1)` with a seeded starting offset.
#[derive(Debug, Clone)]
pub struct GoldenSequence {
    value: f64,
}

impl GoldenSequence {
    pub fn new(seed: u64) -> Self {
        Self {
            value: (derive_seed(seed, 0) >> 11) as f64 / (1u64 << 53) as f64,
        }
    }
}

impl Iterator for GoldenSequence {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        let out = self.value;
        self.value = (self.value + GOLDEN).fract();
        Some(out)
    }
}
