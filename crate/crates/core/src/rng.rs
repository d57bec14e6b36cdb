//! Deterministic random streams.
//!
//! Every random draw in the crate goes through a [`SeededRng`] built from a
//! master seed and a stream id. Streams are ChaCha8 keystreams sharing the
//! key derived from the seed and differing in the stream word, so distinct
//! ids never overlap and each stream reproduces on its own.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Purposes occupy the upper 16 bits of a stream id; the lower 48 bits hold
/// an index (usually a user id).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u16)]
pub enum StreamPurpose {
    Skewness = 1,
    InitialRequests = 2,
    CorrelatedNoise = 3,
    LstmInit = 4,
    Misc = 5,
}

pub fn stream_id(purpose: StreamPurpose, index: u64) -> u64 {
    debug_assert!(index < (1 << 48));
    ((purpose as u64) << 48) | (index & ((1 << 48) - 1))
}

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn for_purpose(seed: u64, purpose: StreamPurpose, index: u64) -> Self {
        Self::new(seed, stream_id(purpose, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
