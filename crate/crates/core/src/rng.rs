//! Deterministic random number generation.
//!
//! The problem generator must reproduce bit-identical output for a given seed
//! across builds and platforms, so the generator algorithm is fixed here
//! rather than delegated to an external crate: xoshiro256++ (Blackman and
//! Vigna's public-domain generator), seeded by expanding a 64-bit seed
//! through SplitMix64. Uniform doubles are derived from the top 53 bits of
//! each output word.

/// SplitMix64 stream, used to expand seeds and derive follow-up seeds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// xoshiro256++ generator.
#[derive(Debug, Clone)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    /// Seeds the four state words from a SplitMix64 stream, as recommended by
    /// the xoshiro authors.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let mut s = [0u64; 4];
        for word in &mut s {
            *word = sm.next_u64();
        }
        if s == [0; 4] {
            // the all-zero state is the one fixed point of the recurrence
            s[0] = 1;
        }
        Self { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform double in the open interval (0, 1): `(c + 0.5) * 2^-53` with
    /// `c` the top 53 bits of the next output word.
    pub fn next_open_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform double in the open interval (-1, 1).
    pub fn next_signed_unit(&mut self) -> f64 {
        2.0 * self.next_open_unit() - 1.0
    }
}
