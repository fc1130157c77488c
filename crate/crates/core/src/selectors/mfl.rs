//! Greedy maximization of the facility location objective
//! `F(L) = sum_i max_{l in L} cos(x_i, x_l)`.

use crate::datamodel::{Pool, Stage};
use crate::par;

use super::{argmax_tied, Pick};

/// Working solution of the facility location objective.
///
/// Holds the dense similarity matrix (`N^2` floats) and, per instance, its
/// best similarity to the selected set (initially -1).
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    n: usize,
    sims: Vec<f64>,
    best: Vec<f64>,
}

impl FacilityLocation {
    pub fn new(pool: &Pool) -> Self {
        let n = pool.len();
        let rows = par::map_range(n, |u| (0..n).map(|i| pool.similarity(u, i)).collect::<Vec<_>>());
        FacilityLocation {
            n,
            sims: rows.concat(),
            best: vec![-1.0; n],
        }
    }

    fn row(&self, u: usize) -> &[f64] {
        &self.sims[u * self.n..(u + 1) * self.n]
    }

    /// Marginal gain of adding `u`: `sum_i max(0, cos(x_i, x_u) - best_i)`.
    pub fn gain(&self, u: usize) -> f64 {
        self.row(u)
            .iter()
            .zip(&self.best)
            .map(|(s, b)| (s - b).max(0.0))
            .sum()
    }

    pub fn insert(&mut self, u: usize) {
        let row = u * self.n;
        for (i, b) in self.best.iter_mut().enumerate() {
            *b = b.max(self.sims[row + i]);
        }
    }

    /// Current `sum_i best_i`.
    pub fn objective(&self) -> f64 {
        self.best.iter().sum()
    }
}

pub fn mfl_greedy(pool: &Pool, budget: usize) -> Vec<Pick> {
    let mut fl = FacilityLocation::new(pool);
    let mut remaining: Vec<usize> = (0..pool.len()).collect();
    let mut picks = Vec::with_capacity(budget);
    for _ in 0..budget {
        let Some((u, gain)) = argmax_tied(&remaining, |u| fl.gain(u)) else {
            break;
        };
        fl.insert(u);
        remaining.retain(|&r| r != u);
        picks.push(Pick::new(u, Stage::Greedy, Some(gain)));
    }
    picks
}
