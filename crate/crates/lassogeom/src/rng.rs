//! Deterministic, splittable random streams.
//!
//! Every stochastic routine in this crate draws from a [`CounterRng`], a
//! counter-based generator in the SplitMix64 family: the output at counter
//! `c` is `mix64(key + c·gamma)`, so any position in a stream is reachable in
//! O(1) and two streams never need to share mutable state. Streams are
//! addressed by a [`SeedSpec`] — a `(master, stream)` pair — and child
//! streams are derived by hashing a tag into the stream id, which gives every
//! trial / chunk / worker its own reproducible stream regardless of scheduling
//! or thread count.

use rand::{Error as RandError, RngCore};
use rand_distr::Distribution;

/// Weyl-sequence increment used by SplitMix64 (2⁶⁴/φ, odd).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stafford "variant 13" finalizer: a bijective avalanche mix on 64 bits.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a per-stream odd increment, rejecting "weak" gammas whose bit
/// pattern has too few 0↔1 transitions to mix well (the SplitMix64 fixup).
#[inline]
fn mix_gamma(seed: u64) -> u64 {
    let g = mix64(seed ^ GOLDEN_GAMMA) | 1;
    if (g ^ (g >> 1)).count_ones() < 24 {
        // 0xaaaa… flips every other bit and has bit 0 clear, so g stays odd.
        g ^ 0xaaaa_aaaa_aaaa_aaaa
    } else {
        g
    }
}

/// Address of a random stream: a master seed shared by a whole experiment and
/// a stream id distinguishing the independent substreams within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(master: u64, stream: u64) -> Self {
        SeedSpec { master, stream }
    }

    /// Deterministically derives an independent child stream for `tag`.
    /// Children of distinct tags, and grandchildren thereof, get distinct
    /// well-mixed stream ids without any shared mutable state.
    pub fn child(&self, tag: u64) -> SeedSpec {
        SeedSpec {
            master: self.master,
            stream: mix64(self.stream.wrapping_mul(GOLDEN_GAMMA) ^ mix64(tag ^ GOLDEN_GAMMA)),
        }
    }

    /// Opens the stream at counter 0.
    pub fn rng(&self) -> CounterRng {
        CounterRng::new(*self)
    }
}

/// Counter-based generator over a [`SeedSpec`] stream.
///
/// `next_u64` returns `mix64(key + counter·gamma)` and advances the counter;
/// `key` and `gamma` are both derived from the seed, with a distinct odd
/// `gamma` per stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    gamma: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: SeedSpec) -> Self {
        let key = mix64(mix64(seed.master) ^ seed.stream);
        CounterRng {
            key,
            gamma: mix_gamma(key.wrapping_add(seed.stream)),
            counter: 0,
        }
    }

    /// Current counter position (number of 64-bit outputs consumed).
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Jumps to an absolute counter position in O(1).
    pub fn set_counter(&mut self, counter: u64) {
        self.counter = counter;
    }

    /// One standard-normal draw (ziggurat method).
    #[inline]
    pub fn normal(&mut self) -> f64 {
        rand_distr::StandardNormal.sample(self)
    }

    /// One uniform draw from [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::gen::<f64>(self)
    }
}

impl RngCore for CounterRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        let out = mix64(self.key.wrapping_add(self.counter.wrapping_mul(self.gamma)));
        self.counter = self.counter.wrapping_add(1);
        out
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        let mut chunks = dest.chunks_exact_mut(8);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&self.next_u64().to_le_bytes());
        }
        let rem = chunks.into_remainder();
        if !rem.is_empty() {
            let bytes = self.next_u64().to_le_bytes();
            rem.copy_from_slice(&bytes[..rem.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.fill_bytes(dest);
        Ok(())
    }
}
