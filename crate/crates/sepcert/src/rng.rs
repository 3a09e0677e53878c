//! Small counter-based random number generator for reproducible scans.
//!
//! The conjecture scan must produce byte-identical output for a given seed,
//! across runs and across reimplementations in other languages, so instead
//! of an external RNG this module pins SplitMix64 with its published
//! constants and documents the exact real-number mapping:
//!
//! * `next_u64`: Vigna's SplitMix64 step
//!   (state += 0x9E3779B97F4A7C15, then two xor-multiply mixes);
//! * `next_unit`: ((x >> 11) + 1) * 2^-53, uniform on (0, 1];
//! * `next_gaussian_pair`: Box-Muller on two consecutive units,
//!   r = sqrt(-2 ln u1), returns (r cos 2πu2, r sin 2πu2).

/// SplitMix64 stream.
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

    /// Uniform double on (0, 1]; never returns 0, so it is safe under `ln`.
    pub fn next_unit(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// One Box-Muller pair of independent standard normals.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        (r * phi.cos(), r * phi.sin())
    }
}
