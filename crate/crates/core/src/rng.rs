//! Deterministic random number generation.
//!
//! All randomness in the crate flows through [`Prng`], a ChaCha8 stream
//! cipher generator keyed from a single `u64` seed via `seed_from_u64`
//! (a fixed, documented SplitMix64 expansion). ChaCha8 is counter-based, so
//! identical seeds reproduce identical streams on every platform.
//!
//! Independent replicate streams are derived with [`derive_seed`], a
//! SplitMix64 mix of `(base, stream)`; replicates never share state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::math;

/// SplitMix64 finalizer step (Steele, Lea, Flood 2014). Used only for seed
/// derivation, never as the sampling generator.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for an independent replicate stream.
#[inline]
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

/// The crate's generator: ChaCha8 keyed from a 64-bit seed.
#[derive(Clone, Debug)]
pub struct Prng {
    inner: ChaCha8Rng,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform in `(0, 1]`; safe as a logarithm argument.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        self.inner.gen_range(0..n)
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Poisson draw; `lambda = 0` yields 0.
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        if lambda <= 0.0 {
            return 0;
        }
        let d = Poisson::new(lambda).expect("positive finite lambda");
        let x: f64 = d.sample(&mut self.inner);
        x as u64
    }

    /// Number of failures before the next success in Bernoulli(p) trials,
    /// computed as `floor(ln(U) / ln(1 - p))` with `U` uniform on `(0, 1]`.
    /// Returns `u64::MAX` when the skip does not fit (caller treats it as
    /// "past the end of the block").
    pub fn geometric_skip(&mut self, p: f64) -> u64 {
        debug_assert!(p > 0.0 && p < 1.0);
        let u = self.uniform_open();
        let s = math::floor(math::ln(u) / math::ln_1p(-p));
        if s >= u64::MAX as f64 {
            u64::MAX
        } else {
            s as u64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Prng::new(7);
        let mut b = Prng::new(7);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn derived_streams_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }

    #[test]
    fn poisson_zero_lambda() {
        let mut r = Prng::new(1);
        assert_eq!(r.poisson(0.0), 0);
    }

    #[test]
    fn geometric_skip_mean() {
        let mut r = Prng::new(42);
        let p = 0.25;
        let n = 20_000;
        let mean = (0..n).map(|_| r.geometric_skip(p) as f64).sum::<f64>() / n as f64;
        // E[skip] = (1-p)/p = 3
        assert!((mean - 3.0).abs() < 0.1, "mean={mean}");
    }
}
