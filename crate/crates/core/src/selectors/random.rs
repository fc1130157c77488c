use crate::datamodel::{Pool, Stage};
use crate::rng::SeededRng;

use super::Pick;

/// Uniform selection without replacement, in draw order.
pub fn random_select(pool: &Pool, budget: usize, seed: u64) -> Vec<Pick> {
    SeededRng::new(seed)
        .sample_indices(pool.len(), budget)
        .into_iter()
        .map(|u| Pick::new(u, Stage::Seed, None))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::Instance;

    fn pool(n: usize) -> Pool {
        Pool::new((0..n).map(|i| Instance::new(format!("p{i}"), vec![1.0, i as f64])).collect()).unwrap()
    }

    #[test]
    fn full_budget_is_a_permutation() {
        let mut idx: Vec<usize> = random_select(&pool(9), 9, 4).iter().map(|p| p.index).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn same_seed_same_picks() {
        assert_eq!(random_select(&pool(30), 5, 8), random_select(&pool(30), 5, 8));
    }

    #[test]
    fn single_pick_is_uniform() {
        let p = pool(5);
        let mut counts = [0usize; 5];
        for seed in 0..10_000 {
            counts[random_select(&p, 1, seed)[0].index] += 1;
        }
        let sigma = (10_000.0f64 * 0.2 * 0.8).sqrt();
        assert!(counts.iter().all(|&c| (c as f64 - 2000.0).abs() < 5.0 * sigma), "{counts:?}");
    }
}
