//! Selectors against the brute-force references in `common`.

mod common;

use annokit::datamodel::Stage;
use annokit::rng::SeededRng;
use annokit::selectors::{
    diversity_select, fast_vote_k, least_confidence, mfl_greedy, vote_k_stage1, VoteState,
};
use annokit::{build_knn_graph, confidence::PoolLabels, MockScorer};

fn indices(picks: &[annokit::selectors::Pick]) -> Vec<usize> {
    picks.iter().map(|p| p.index).collect()
}

#[test]
fn knn_graph_matches_reference() {
    for seed in 0..20 {
        let rp = common::random_pool(seed);
        let g = build_knn_graph(&rp.pool, rp.k);
        let want = common::knn(&rp.raw, rp.k);
        for (v, nb) in want.iter().enumerate() {
            let got: Vec<usize> = g.out_edges(v).iter().map(|e| e.target).collect();
            assert_eq!(&got, nb, "seed {seed} vertex {v}");
        }
    }
}

#[test]
fn vote_sequences_match_reference() {
    for seed in 0..20 {
        let rp = common::random_pool(seed);
        let n = rp.pool.len();
        let g = build_knn_graph(&rp.pool, rp.k);
        let m = n / 2;
        let want = common::vote_sequence(&rp.raw, rp.k, 10.0, m);
        assert_eq!(indices(&fast_vote_k(&g, m, 10.0)), want, "seed {seed}");

        let mut state = VoteState::new(n);
        let s1 = vote_k_stage1(&g, &mut state, m.min(5), 10.0);
        assert_eq!(indices(&s1), want[..m.min(5)], "seed {seed}");
    }
}

#[test]
fn incremental_counts_match_recount() {
    for seed in 20..30 {
        let rp = common::random_pool(seed);
        let g = build_knn_graph(&rp.pool, rp.k);
        let nbrs = common::knn(&rp.raw, rp.k);
        let mut state = VoteState::new(rp.pool.len());
        for _ in 0..rp.pool.len().min(12) {
            vote_k_stage1(&g, &mut state, 1, 3.0);
            for (v, out) in nbrs.iter().enumerate() {
                let recount = out.iter().filter(|l| state.selected().contains(l)).count();
                assert_eq!(state.covered(v) as usize, recount);
            }
        }
    }
}

#[test]
fn mfl_matches_reference_and_objective_grows() {
    for seed in 0..20 {
        let rp = common::random_pool(seed);
        let m = rp.pool.len().min(10);
        let picks = mfl_greedy(&rp.pool, m);
        let (want, trail) = common::mfl_sequence(&rp.raw, m);
        assert_eq!(indices(&picks), want, "seed {seed}");
        assert!(trail.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(picks.iter().all(|p| p.stage == Stage::Greedy));
    }
}

#[test]
fn diversity_matches_reference() {
    for seed in 0..20 {
        let rp = common::random_pool(seed);
        let m = rp.pool.len().min(12);
        let picks = diversity_select(&rp.pool, m, seed);
        let first = SeededRng::new(seed).below(rp.pool.len());
        assert_eq!(picks[0].index, first);
        assert_eq!(indices(&picks), common::diversity_sequence(&rp.raw, m, first), "seed {seed}");
    }
}

#[test]
fn least_confidence_matches_reference() {
    for seed in 0..20 {
        let rp = common::random_pool(seed);
        let n = rp.pool.len();
        let (m, round) = ((n / 2).max(2), 1 + (seed as usize % 4));
        let picks = least_confidence(&rp.pool, m, Some(&MockScorer), seed, round, &PoolLabels).unwrap();
        let seed_round = SeededRng::new(seed).sample_indices(n, round.min(m));
        let want = common::least_confidence_sequence(&rp.raw, m, &seed_round, round);
        assert_eq!(indices(&picks), want, "seed {seed}");
    }
}

#[test]
fn thirty_point_least_confidence_rounds_of_five() {
    let mut mix = common::Mix(7);
    let raw: Vec<Vec<f64>> = (0..30).map(|_| (0..4).map(|_| mix.unit() - 0.5).collect()).collect();
    let pool = common::pool_from(&raw);
    let picks = least_confidence(&pool, 10, Some(&MockScorer), 3, 5, &PoolLabels).unwrap();
    let seed_round = SeededRng::new(3).sample_indices(30, 5);
    assert_eq!(indices(&picks), common::least_confidence_sequence(&raw, 10, &seed_round, 5));
}
