//! Vote-k: graph voting with a diversity discount, then confidence buckets.
//!
//! Every remaining vertex `u` is scored by the votes of its remaining
//! in-neighbors, `score(u) = sum over v in U with (v, u) in E of rho^-c(v)`,
//! where `c(v)` counts the already selected vertices among `v`'s
//! out-neighbors. Voters close to the selected set count for less.

use std::ops::Range;

use crate::confidence::{score_queries, ConfidenceScorer, DemoSet, LabelSource, Query};
use crate::datamodel::{Pool, SelectionConfig, Stage};
use crate::error::{Error, Result};
use crate::simgraph::SimilarityGraph;

use super::{argmax, Pick};

/// Selected set, remaining set and per-vertex selected-neighbor counts.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteState {
    selected: Vec<usize>,
    remaining: Vec<bool>,
    covered: Vec<u32>,
}

impl VoteState {
    pub fn new(n: usize) -> Self {
        VoteState {
            selected: Vec::new(),
            remaining: vec![true; n],
            covered: vec![0; n],
        }
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn is_remaining(&self, u: usize) -> bool {
        self.remaining[u]
    }

    pub fn remaining(&self) -> Vec<usize> {
        (0..self.remaining.len()).filter(|&u| self.remaining[u]).collect()
    }

    /// `c(v)`: number of selected vertices among `v`'s out-neighbors.
    pub fn covered(&self, v: usize) -> u32 {
        self.covered[v]
    }

    /// Moves `u` from the remaining set to the selected set.
    pub fn select(&mut self, graph: &SimilarityGraph, u: usize) {
        assert!(self.remaining[u], "vertex {u} already selected");
        self.remaining[u] = false;
        self.selected.push(u);
        for &v in graph.in_edges(u) {
            self.covered[v] += 1;
        }
    }

    fn discount(&self, v: usize, rho: f64) -> f64 {
        rho.powi(-(self.covered[v] as i32))
    }
}

/// Vote score of a single vertex against the current state.
pub fn vote_score(graph: &SimilarityGraph, state: &VoteState, rho: f64, u: usize) -> f64 {
    graph
        .in_edges(u)
        .iter()
        .filter(|&&v| state.is_remaining(v))
        .map(|&v| state.discount(v, rho))
        .sum()
}

/// Scores of all remaining vertices, ascending by vertex.
pub fn vote_scores(graph: &SimilarityGraph, state: &VoteState, rho: f64) -> Vec<(usize, f64)> {
    state
        .remaining()
        .into_iter()
        .map(|u| (u, vote_score(graph, state, rho, u)))
        .collect()
}

/// `count` rounds of: take the remaining vertex with the highest vote score.
pub fn vote_k_stage1(
    graph: &SimilarityGraph,
    state: &mut VoteState,
    count: usize,
    rho: f64,
) -> Vec<Pick> {
    let mut picks = Vec::with_capacity(count);
    for _ in 0..count {
        let candidates = state.remaining();
        let Some((u, score)) = argmax(&candidates, |u| vote_score(graph, state, rho, u)) else {
            break;
        };
        state.select(graph, u);
        picks.push(Pick::new(u, Stage::GraphVote, Some(score)));
    }
    picks
}

/// Graph voting for the whole budget; no confidence pass.
pub fn fast_vote_k(graph: &SimilarityGraph, budget: usize, rho: f64) -> Vec<Pick> {
    let mut state = VoteState::new(graph.len());
    vote_k_stage1(graph, &mut state, budget, rho)
}

/// Top-`budget` vertices by undiscounted in-degree, for comparison with the
/// iterative variant.
pub fn fast_vote_k_single_pass(graph: &SimilarityGraph, budget: usize) -> Vec<Pick> {
    let mut scored: Vec<(usize, f64)> = (0..graph.len())
        .map(|u| (u, graph.in_edges(u).len() as f64))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored
        .into_iter()
        .take(budget)
        .map(|(u, s)| Pick::new(u, Stage::GraphVote, Some(s)))
        .collect()
}

/// Splits `len` sorted items into `count` contiguous ranges whose sizes
/// differ by at most one, larger ranges first.
pub fn partition_buckets(len: usize, count: usize) -> Vec<Range<usize>> {
    let (base, extra) = (len / count, len % count);
    let mut start = 0;
    (0..count)
        .map(|j| {
            let size = base + usize::from(j < extra);
            let r = start..start + size;
            start += size;
            r
        })
        .collect()
}

/// Full two-stage vote-k.
///
/// Stage one takes `s1` graph-vote picks. The selected set then serves as
/// demonstrations for scoring every remaining instance. Remaining instances
/// are sorted by ascending confidence and cut into `M` buckets; the `M - s1`
/// least confident buckets each contribute their highest vote-score member,
/// with discounts updated after every pick.
pub fn vote_k(
    pool: &Pool,
    graph: &SimilarityGraph,
    config: &SelectionConfig,
    scorer: Option<&dyn ConfidenceScorer>,
    labels: &dyn LabelSource,
) -> Result<Vec<Pick>> {
    let m = config.budget;
    let s1 = config.stage_one();
    let rho = config.rho;
    let mut state = VoteState::new(pool.len());
    let mut picks = vote_k_stage1(graph, &mut state, s1, rho);
    if s1 >= m {
        return Ok(picks);
    }
    let scorer = scorer.ok_or_else(|| Error::config("vote_k needs a confidence scorer"))?;

    let demos = DemoSet::build(pool, state.selected(), labels, scorer.requires_labels())?;
    let demos = demos.demonstrations(pool);
    let unlabeled = state.remaining();
    let queries: Vec<Query<'_>> = unlabeled
        .iter()
        .map(|&u| Query::from_instance(pool.get(u)))
        .collect();
    let confidence = score_queries(scorer, &demos, &queries)?;

    let mut order: Vec<usize> = (0..unlabeled.len()).collect();
    order.sort_by(|&a, &b| {
        confidence[a]
            .total_cmp(&confidence[b])
            .then(unlabeled[a].cmp(&unlabeled[b]))
    });
    let sorted: Vec<usize> = order.into_iter().map(|i| unlabeled[i]).collect();

    // |U| = N - s1 >= M - s1 and larger buckets come first, so every kept
    // bucket has at least one member.
    for (bucket, range) in partition_buckets(sorted.len(), m).into_iter().take(m - s1).enumerate() {
        let mut members = sorted[range].to_vec();
        members.sort_unstable();
        let (u, score) = argmax(&members, |u| vote_score(graph, &state, rho, u))
            .expect("kept buckets are non-empty");
        state.select(graph, u);
        picks.push(Pick {
            index: u,
            stage: Stage::ConfidenceBucket,
            score: Some(score),
            bucket: Some(bucket),
        });
    }
    Ok(picks)
}
