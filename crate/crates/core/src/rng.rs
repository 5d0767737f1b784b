//! Seeded, splittable random streams.
//!
//! A stream is identified by `(seed, stream_id)`. The generator is ChaCha8
//! keyed by the seed with the 64-bit ChaCha stream word set to `stream_id`, so
//! every stream is an independent keystream and the sequence depends only on
//! the pair, never on which thread consumes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Child stream for replicate / task `index`.
    ///
    /// Children of distinct parents or distinct indices get distinct ids with
    /// overwhelming probability (64-bit mixing).
    pub fn substream(&self, index: u64) -> RngStream {
        let mixed =
            splitmix64(self.stream_id ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        RngStream {
            seed: self.seed,
            stream_id: mixed,
        }
    }

    /// Named child stream; used to keep pipeline stages (graph, weights,
    /// sources, ...) on disjoint streams.
    pub fn labeled(&self, label: &str) -> RngStream {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        self.substream(h)
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Stateless uniform in (0, 1) for `counter`; used where a value must be
    /// addressable by index (per-edge tie-break keys).
    pub fn hashed_uniform(&self, counter: u64) -> f64 {
        let h = splitmix64(splitmix64(self.seed ^ self.stream_id.rotate_left(17)) ^ counter);
        // 53 random mantissa bits, shifted off zero.
        ((h >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
