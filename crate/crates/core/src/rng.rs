//! Seeded, portable instance generation.
//!
//! The raw stream is SplitMix64 (increment `0x9E3779B97F4A7C15`, the
//! standard finalizer). Derived draws are pinned so another implementation
//! can reproduce every generated instance from the seed alone:
//!
//! * `below(n)`: rejection sampling on `next_u64` with zone
//!   `u64::MAX - u64::MAX % n`, result `x % n`.
//! * `shuffle`: Fisher-Yates from the last index down, `j = below(i + 1)`.
//! * `unit_f64`: top 53 bits of `next_u64` scaled by `2^-53`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct InstanceRng {
    inner: SplitMix64,
}

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: SplitMix64::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn coin(&mut self) -> bool {
        self.below(2) == 1
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    /// Independent child stream, e.g. one per generated instance.
    pub fn fork(&mut self) -> Self {
        Self::new(self.next_u64())
    }
}
