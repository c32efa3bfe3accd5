//! The seedable generator every randomized step draws from.
//!
//! Datasets must be reproducible across machines, so the algorithm is pinned:
//! PCG XSL-RR 128/64 (`rand_pcg::Pcg64`), seeded through
//! `SeedableRng::seed_from_u64`. Uniform doubles take the top 53 bits of each
//! 64-bit output. Changing any of these changes every generated image.

use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;

/// Deterministic 64-bit generator used by the shuffle and the fold splitter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicRng {
    inner: Pcg64,
}

impl DeterministicRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: Pcg64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform double in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by rejection on the 64-bit output.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Fisher-Yates shuffle, walking from the back of the slice.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-image shuffle seed derived from the dataset seed and the sample's
/// (source file index, packet index) coordinates.
pub fn image_seed(global_seed: u64, file_index: u64, packet_index: u64) -> u64 {
    let h = splitmix64(global_seed);
    let h = splitmix64(h ^ file_index);
    splitmix64(h ^ packet_index)
}
