//! Small numeric helpers shared across modules.

use num_complex::Complex64;

/// `r^z` for a positive real base, via the principal branch.
pub(crate) fn real_pow(r: f64, z: Complex64) -> Complex64 {
    debug_assert!(r > 0.0);
    (z * r.ln()).exp()
}

/// Deterministic 64-bit generator for battery sampling; keeps reports
/// byte-reproducible without pulling a RNG crate into the library.
#[derive(Debug, Clone)]
pub(crate) struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut x = self.0;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
        x ^ (x >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn pick(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}
