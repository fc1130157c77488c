use crate::datamodel::{Pool, Stage};
use crate::rng::SeededRng;

use super::{argmin_tied, Pick};

/// Farthest-first selection in cosine terms: a random first pick, then
/// repeatedly the instance with the smallest total similarity to the
/// selected set.
pub fn diversity_select(pool: &Pool, budget: usize, seed: u64) -> Vec<Pick> {
    let n = pool.len();
    let mut picks = Vec::with_capacity(budget);
    if budget == 0 {
        return picks;
    }
    let first = SeededRng::new(seed).below(n);
    picks.push(Pick::new(first, Stage::Seed, None));

    let mut total = vec![0.0f64; n];
    let mut remaining: Vec<usize> = (0..n).filter(|&u| u != first).collect();
    let mut last = first;
    while picks.len() < budget {
        for &u in &remaining {
            total[u] += pool.similarity(u, last);
        }
        let Some((u, sum)) = argmin_tied(&remaining, |u| total[u]) else {
            break;
        };
        remaining.retain(|&r| r != u);
        picks.push(Pick::new(u, Stage::Greedy, Some(sum)));
        last = u;
    }
    picks
}
