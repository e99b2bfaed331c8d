//! Seeded generator for random fields and random test instances.
//!
//! xorshift64* (Vigna 2016), bit-exact:
//!
//! ```text
//! state = seed, or 0x853C49E6748FEA9B if seed == 0
//! next:  x ^= x >> 12; x ^= x << 25; x ^= x >> 27; state = x
//!        return x * 0x2545F4914F6CDD1D   (wrapping)
//! unit:  (next >> 11) * 2^-53            in [0, 1)
//! pm1:   2 * unit - 1                    in [-1, 1)
//! ```

#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        XorShift64Star { state: if seed == 0 { 0x853C_49E6_748F_EA9B } else { seed } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_pm1(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `0..k`.
    pub fn below(&mut self, k: u64) -> u64 {
        self.next_u64() % k
    }
}
