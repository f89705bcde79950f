//! Counter-based random streams for order-independent Monte Carlo.
//!
//! A stream is keyed by `(seed, domain)` and addressed by an index, so the
//! draws of trial `i` never depend on which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates independent uses of the same user seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    InputPower = 0x5157_4950_5449_4e00,
    BitErrors = 0x5157_4950_5442_4500,
}

#[derive(Debug, Clone)]
pub struct Streams {
    base: ChaCha8Rng,
}

impl Streams {
    pub fn new(seed: u64, domain: Domain) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
        Self {
            base: ChaCha8Rng::from_seed(key),
        }
    }

    /// Generator positioned at the start of stream `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        rng
    }
}
