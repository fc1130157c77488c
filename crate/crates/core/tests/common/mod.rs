//! Brute-force reference implementations used as test oracles.
//!
//! Everything here works on the raw, unnormalized embeddings and recomputes
//! state from scratch each step; none of it calls into the selectors.

#![allow(dead_code)]

use annokit::{Instance, Pool};

/// SplitMix64, kept separate from the crate RNG.
pub struct Mix(pub u64);

impl Mix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

pub struct RandomPool {
    pub raw: Vec<Vec<f64>>,
    pub pool: Pool,
    pub k: usize,
}

/// Random pool with `n` in 5..=50, `d` in 2..=8, `k` in 1..=5.
pub fn random_pool(seed: u64) -> RandomPool {
    let mut mix = Mix(seed);
    let n = mix.range(5, 50);
    let d = mix.range(2, 8);
    let k = mix.range(1, 5);
    let raw: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| mix.unit() * 2.0 - 1.0).collect())
        .collect();
    let pool = pool_from(&raw);
    RandomPool { raw, pool, k }
}

pub fn pool_from(raw: &[Vec<f64>]) -> Pool {
    Pool::new(
        raw.iter()
            .enumerate()
            .map(|(i, e)| {
                Instance::new(format!("x{i}"), e.clone())
                    .with_text(format!("item {i}"))
                    .with_label(format!("y{}", i % 3))
            })
            .collect(),
    )
    .unwrap()
}

/// Ties within a relative 1e-12 go to the lower index.
pub fn beats(candidate: f64, best: f64) -> bool {
    candidate > best + 1e-12 * best.abs().max(1.0)
}

pub fn cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0)
}

/// Neighbor lists by exhaustive sort of every other point.
pub fn knn(raw: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    let n = raw.len();
    (0..n)
        .map(|v| {
            let mut others: Vec<(f64, usize)> =
                (0..n).filter(|&u| u != v).map(|u| (cos(&raw[v], &raw[u]), u)).collect();
            others.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            others.into_iter().take(k).map(|(_, u)| u).collect()
        })
        .collect()
}

/// Vote score of `u`, recounting every selected-neighbor count.
pub fn vote_score(nbrs: &[Vec<usize>], selected: &[usize], rho: f64, u: usize) -> f64 {
    let mut total = 0.0;
    for (v, out) in nbrs.iter().enumerate() {
        if selected.contains(&v) || !out.contains(&u) {
            continue;
        }
        let c = out.iter().filter(|l| selected.contains(l)).count() as i32;
        total += rho.powi(-c);
    }
    total
}

/// Greedy vote sequence from an empty selection.
pub fn vote_sequence(raw: &[Vec<f64>], k: usize, rho: f64, count: usize) -> Vec<usize> {
    let nbrs = knn(raw, k);
    let mut selected = Vec::new();
    for _ in 0..count {
        let mut best: Option<(usize, f64)> = None;
        for u in (0..raw.len()).filter(|u| !selected.contains(u)) {
            let s = vote_score(&nbrs, &selected, rho, u);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((u, s));
            }
        }
        selected.push(best.unwrap().0);
    }
    selected
}

/// Facility-location greedy with the objective recomputed from scratch.
/// Returns the picks and the objective after each pick.
pub fn mfl_sequence(raw: &[Vec<f64>], m: usize) -> (Vec<usize>, Vec<f64>) {
    let n = raw.len();
    let objective = |sel: &[usize]| -> f64 {
        (0..n)
            .map(|i| sel.iter().map(|&l| cos(&raw[i], &raw[l])).fold(-1.0, f64::max))
            .sum()
    };
    let mut selected: Vec<usize> = Vec::new();
    let mut trail = Vec::new();
    for _ in 0..m {
        let best_i: Vec<f64> = (0..n)
            .map(|i| selected.iter().map(|&l| cos(&raw[i], &raw[l])).fold(-1.0, f64::max))
            .collect();
        let mut best: Option<(usize, f64)> = None;
        for u in (0..n).filter(|u| !selected.contains(u)) {
            let gain: f64 = (0..n).map(|i| (cos(&raw[i], &raw[u]) - best_i[i]).max(0.0)).sum();
            if best.is_none_or(|(_, b)| beats(gain, b)) {
                best = Some((u, gain));
            }
        }
        selected.push(best.unwrap().0);
        trail.push(objective(&selected));
    }
    (selected, trail)
}

/// Farthest-first by total cosine, from a given first pick.
pub fn diversity_sequence(raw: &[Vec<f64>], m: usize, first: usize) -> Vec<usize> {
    let mut selected = vec![first];
    while selected.len() < m {
        let mut best: Option<(usize, f64)> = None;
        for u in (0..raw.len()).filter(|u| !selected.contains(u)) {
            let s: f64 = selected.iter().map(|&l| cos(&raw[u], &raw[l])).sum();
            if best.is_none_or(|(_, b)| beats(-s, -b)) {
                best = Some((u, s));
            }
        }
        selected.push(best.unwrap().0);
    }
    selected
}

/// Mock confidence `-(1 - max cos to demos)`.
pub fn mock_confidence(raw: &[Vec<f64>], demos: &[usize], q: usize) -> f64 {
    let best = demos.iter().map(|&d| cos(&raw[q], &raw[d])).fold(-1.0, f64::max);
    -(1.0 - best)
}

/// Least-confidence rounds after a given seed round.
pub fn least_confidence_sequence(raw: &[Vec<f64>], m: usize, seed_round: &[usize], round: usize) -> Vec<usize> {
    let mut selected = seed_round.to_vec();
    while selected.len() < m {
        let mut scored: Vec<(f64, usize)> = (0..raw.len())
            .filter(|u| !selected.contains(u))
            .map(|u| (mock_confidence(raw, &selected, u), u))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let take = round.min(m - selected.len());
        selected.extend(scored.iter().take(take).map(|&(_, u)| u));
    }
    selected
}
