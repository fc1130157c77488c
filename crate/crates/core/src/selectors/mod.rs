//! Selective annotation strategies.
//!
//! Every selector returns exactly `M` distinct pool positions together with a
//! per-pick trace. Ties in any argmax/argmin go to the lower pool index.

mod diversity;
mod least_confidence;
mod mfl;
mod random;
mod vote;

use crate::confidence::{ConfidenceScorer, LabelSource, PoolLabels};
use crate::datamodel::{Method, Pool, SelectionConfig, SelectionResult, Stage, TraceEntry, RESULT_VERSION};
use crate::error::{Error, Result};
use crate::par;
use crate::simgraph::{build_knn_graph, SimilarityGraph};

pub use diversity::diversity_select;
pub use least_confidence::least_confidence;
pub use mfl::{mfl_greedy, FacilityLocation};
pub use random::random_select;
pub use vote::{
    fast_vote_k, fast_vote_k_single_pass, partition_buckets, vote_k, vote_k_stage1, vote_score,
    vote_scores, VoteState,
};

/// One selection with its trace data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pick {
    pub index: usize,
    pub stage: Stage,
    pub score: Option<f64>,
    pub bucket: Option<usize>,
}

impl Pick {
    fn new(index: usize, stage: Stage, score: Option<f64>) -> Self {
        Pick {
            index,
            stage,
            score,
            bucket: None,
        }
    }
}

/// Turns picks into the serialized result document.
pub fn to_result(pool: &Pool, config: &SelectionConfig, picks: &[Pick]) -> SelectionResult {
    SelectionResult {
        version: RESULT_VERSION,
        method: config.method,
        config: config.resolved(),
        selected: picks.iter().map(|p| pool.get(p.index).id.clone()).collect(),
        trace: picks
            .iter()
            .enumerate()
            .map(|(step, p)| TraceEntry {
                step,
                stage: p.stage,
                score: p.score,
                bucket: p.bucket,
            })
            .collect(),
    }
}

/// Runs the configured selector, labeling demonstrations from the pool.
pub fn run_selection(
    pool: &Pool,
    config: &SelectionConfig,
    scorer: Option<&dyn ConfidenceScorer>,
) -> Result<SelectionResult> {
    run_selection_with(pool, config, scorer, &PoolLabels, None)
}

/// Runs the configured selector. `graph`, when given, must have been built
/// over `pool` with `config.k`; otherwise it is built here for graph methods.
pub fn run_selection_with(
    pool: &Pool,
    config: &SelectionConfig,
    scorer: Option<&dyn ConfidenceScorer>,
    labels: &dyn LabelSource,
    graph: Option<&SimilarityGraph>,
) -> Result<SelectionResult> {
    config.validate(pool.len())?;
    let m = config.budget;

    if let Some(g) = graph {
        if g.len() != pool.len() || g.k() != config.k {
            return Err(Error::config(format!(
                "graph (n={}, k={}) does not match pool (n={}) and k={}",
                g.len(),
                g.k(),
                pool.len(),
                config.k
            )));
        }
    }
    let owned;
    let graph = match (config.method, graph) {
        (Method::VoteK | Method::FastVoteK, None) => {
            owned = build_knn_graph(pool, config.k);
            Some(&owned)
        }
        (_, g) => g,
    };

    let needs_scorer = match config.method {
        Method::VoteK => config.stage_one() < m,
        Method::LeastConfidence => config.round_size() < m,
        _ => false,
    };
    let scorer = match (needs_scorer, scorer) {
        (true, None) => {
            return Err(Error::config(format!(
                "method {} needs a confidence scorer",
                config.method
            )))
        }
        (_, s) => s,
    };

    let picks = match config.method {
        Method::VoteK => vote_k(pool, graph.unwrap(), config, scorer, labels)?,
        Method::FastVoteK if config.single_pass => fast_vote_k_single_pass(graph.unwrap(), m),
        Method::FastVoteK => fast_vote_k(graph.unwrap(), m, config.rho),
        Method::Mfl => mfl_greedy(pool, m),
        Method::Diversity => diversity_select(pool, m, config.seed),
        Method::LeastConfidence => least_confidence(
            pool,
            m,
            scorer,
            config.seed,
            config.round_size(),
            labels,
        )?,
        Method::Random => random_select(pool, m, config.seed),
    };
    debug_assert_eq!(picks.len(), m);
    Ok(to_result(pool, config, &picks))
}

/// `(index, score)` of the highest score among `candidates`; candidates must
/// be ascending so that the first maximum is the lowest index.
pub(crate) fn argmax<F>(candidates: &[usize], score: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let scores = par::map(candidates, |&u| score(u));
    best_by(candidates, &scores, |a, b| a > b)
}

/// Relative gap below which two similarity-sum scores count as tied.
///
/// Facility-location gains and total-similarity sums can be equal in exact
/// arithmetic (e.g. two points that only improve each other's coverage) yet
/// differ in the last bits depending on summation order. Treating such gaps
/// as ties keeps the lower-index rule independent of rounding.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn tolerance(best: f64) -> f64 {
    TIE_TOLERANCE * best.abs().max(1.0)
}

/// Like [`argmax`], but a candidate must beat the running best by more than
/// [`TIE_TOLERANCE`].
pub(crate) fn argmax_tied<F>(candidates: &[usize], score: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let scores = par::map(candidates, |&u| score(u));
    best_by(candidates, &scores, |a, b| a > b + tolerance(b))
}

/// Lowest score, with the same tie tolerance as [`argmax_tied`].
pub(crate) fn argmin_tied<F>(candidates: &[usize], score: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let scores = par::map(candidates, |&u| score(u));
    best_by(candidates, &scores, |a, b| a < b - tolerance(b))
}

fn best_by(
    candidates: &[usize],
    scores: &[f64],
    better: impl Fn(f64, f64) -> bool,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (&u, &s) in candidates.iter().zip(scores) {
        match best {
            Some((_, b)) if !better(s, b) => {}
            _ => best = Some((u, s)),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_go_to_first_candidate() {
        assert_eq!(argmax(&[2, 5, 7], |_| 1.0), Some((2, 1.0)));
        assert_eq!(argmin_tied(&[2, 5, 7], |u| (u % 5) as f64), Some((5, 0.0)));
        assert_eq!(argmax(&[], |_| 0.0), None);
        assert_eq!(argmax_tied(&[3, 4], |u| 1.0 + u as f64 * 1e-15), Some((3, 1.0 + 3e-15)));
        assert_eq!(argmax(&[3, 4], |u| 1.0 + u as f64 * 1e-15).unwrap().0, 4);
        assert_eq!(argmin_tied(&[3, 4], |u| 1.0 - u as f64 * 1e-15).unwrap().0, 3);
    }
}
