use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded generator with counter-based child streams.
///
/// The algorithm is ChaCha with 8 rounds as implemented by `rand_chacha` 0.9.
/// The 256-bit key is expanded from the 64-bit seed by
/// `SeedableRng::seed_from_u64` (PCG32 expansion, fixed by `rand_core`). The
/// 64-bit ChaCha stream id is `(experiment << 32) | replicate`, so every
/// `(seed, experiment, replicate)` triple addresses its own keystream and
/// replicates can be generated in any order or in parallel.
///
/// Uniform doubles take the top 53 bits of `next_u64`.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    /// Stream `(0, 0)` of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::for_stream(seed, 0, 0)
    }

    /// Independent child stream for replicate `replicate` of experiment
    /// `experiment`.
    pub fn for_stream(seed: u64, experiment: u32, replicate: u32) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(((experiment as u64) << 32) | replicate as u64);
        SeededRng { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `[0, 1)` with 53 random bits.
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
