use crate::confidence::{score_queries, ConfidenceScorer, DemoSet, LabelSource, Query};
use crate::datamodel::{Pool, Stage};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

use super::Pick;

/// Iterative uncertainty sampling.
///
/// A seeded random round of `round_size` picks starts the set. Each later
/// round scores every remaining instance with the current selection as
/// demonstrations and adds the `round_size` least confident ones. The last
/// round is truncated to meet the budget.
pub fn least_confidence(
    pool: &Pool,
    budget: usize,
    scorer: Option<&dyn ConfidenceScorer>,
    seed: u64,
    round_size: usize,
    labels: &dyn LabelSource,
) -> Result<Vec<Pick>> {
    if round_size == 0 {
        return Err(Error::config("round size must be ≥ 1"));
    }
    let n = pool.len();
    let first_round = round_size.min(budget);
    let mut picks: Vec<Pick> = SeededRng::new(seed)
        .sample_indices(n, first_round)
        .into_iter()
        .map(|u| Pick::new(u, Stage::Seed, None))
        .collect();
    if picks.len() == budget {
        return Ok(picks);
    }
    let scorer = scorer.ok_or_else(|| Error::config("least_confidence needs a confidence scorer"))?;

    let mut selected = vec![false; n];
    for p in &picks {
        selected[p.index] = true;
    }
    while picks.len() < budget {
        let chosen: Vec<usize> = picks.iter().map(|p| p.index).collect();
        let demos = DemoSet::build(pool, &chosen, labels, scorer.requires_labels())?;
        let demos = demos.demonstrations(pool);
        let remaining: Vec<usize> = (0..n).filter(|&u| !selected[u]).collect();
        let queries: Vec<Query<'_>> = remaining
            .iter()
            .map(|&u| Query::from_instance(pool.get(u)))
            .collect();
        let conf = score_queries(scorer, &demos, &queries)?;
        let mut order: Vec<usize> = (0..remaining.len()).collect();
        order.sort_by(|&a, &b| conf[a].total_cmp(&conf[b]).then(remaining[a].cmp(&remaining[b])));
        let take = round_size.min(budget - picks.len());
        for &i in order.iter().take(take) {
            selected[remaining[i]] = true;
            picks.push(Pick::new(remaining[i], Stage::Greedy, Some(conf[i])));
        }
    }
    Ok(picks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence::{Demonstration, PoolLabels};
    use crate::datamodel::Instance;
    use crate::error::ScoreError;

    struct Constant;
    impl ConfidenceScorer for Constant {
        fn score(&self, _: &[Demonstration<'_>], _: &Query<'_>) -> Result<f64, ScoreError> {
            Ok(0.0)
        }
    }

    fn pool(n: usize) -> Pool {
        Pool::new((0..n).map(|i| Instance::new(format!("p{i}"), vec![1.0, i as f64])).collect()).unwrap()
    }

    #[test]
    fn constant_scorer_follows_index_order_after_seed_round() {
        let p = pool(20);
        let picks = least_confidence(&p, 9, Some(&Constant), 5, 3, &PoolLabels).unwrap();
        let seeds: Vec<usize> = picks[..3].iter().map(|p| p.index).collect();
        let rest: Vec<usize> = picks[3..].iter().map(|p| p.index).collect();
        let want: Vec<usize> = (0..20).filter(|u| !seeds.contains(u)).take(6).collect();
        assert_eq!(rest, want);
    }

    #[test]
    fn single_round_is_random_selection() {
        let p = pool(20);
        let picks = least_confidence(&p, 4, None, 77, 4, &PoolLabels).unwrap();
        assert_eq!(picks, super::super::random_select(&p, 4, 77));
    }

    #[test]
    fn final_round_is_truncated() {
        let p = pool(20);
        let picks = least_confidence(&p, 7, Some(&Constant), 1, 3, &PoolLabels).unwrap();
        assert_eq!(picks.len(), 7);
    }
}
