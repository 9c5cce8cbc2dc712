//! Counter-based randomness: the stream for sample `i` depends only on the
//! run seed and `i`, never on how samples are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ChaCha words reserved per sample (one 64-byte block).
const WORDS_PER_SAMPLE: u128 = 16;

#[derive(Debug, Clone)]
pub struct CounterRng {
    base: ChaCha8Rng,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { base: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Generator positioned at the block owned by `index`. Up to eight `u64`
    /// draws stay inside that block.
    pub fn sample(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_word_pos(index as u128 * WORDS_PER_SAMPLE);
        rng
    }

    /// `count` uniforms in `[0, 1)` for sample `index`.
    pub fn uniforms<const N: usize>(&self, index: u64) -> [f64; N] {
        assert!(N <= 8, "at most eight draws per sample");
        let mut rng = self.sample(index);
        std::array::from_fn(|_| rng.random::<f64>())
    }
}
