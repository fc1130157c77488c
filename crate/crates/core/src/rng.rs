//! Seeded randomness.
//!
//! All random choices in the crate draw from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64` (PCG32 key expansion, as documented by
//! `rand_core`). Bounded integers are sampled over `u64` ranges so that a
//! seed produces the same draws on 32- and 64-bit targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        self.0.random_range(0..bound as u64) as usize
    }

    /// `count` distinct indices from `0..n`, uniform without replacement, in
    /// draw order (partial Fisher-Yates).
    pub fn sample_indices(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n, "cannot draw {count} of {n}");
        let mut perm: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.below(n - i);
            perm.swap(i, j);
        }
        perm.truncate(count);
        perm
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<usize> = {
            let mut r = SeededRng::new(42);
            (0..20).map(|_| r.below(1000)).collect()
        };
        let mut r = SeededRng::new(42);
        let b: Vec<usize> = (0..20).map(|_| r.below(1000)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_indices_distinct() {
        let mut r = SeededRng::new(3);
        let mut s = r.sample_indices(100, 100);
        s.sort_unstable();
        assert_eq!(s, (0..100).collect::<Vec<_>>());
    }
}
