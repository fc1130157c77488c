//! Diversity and representativeness of a selection, plus the multi-trial
//! harness.
//!
//! - `div_f`: `1 - mean pairwise cosine` over selected embeddings, in `[0, 2]`.
//! - `repr`: mean over the pool of the best cosine to any selected instance.
//! - `div_i`: `1 - mean pairwise Jaccard` of whitespace token sets.
//! - cluster coverage: distinct ground-truth clusters hit by the selection.

pub mod synthetic;
mod trials;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::datamodel::Pool;
use crate::error::{DataError, Result};
use crate::par;

pub use trials::{run_trials, Stat, TrialOptions, TrialRecord, TrialSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    DivI,
    DivF,
    Repr,
    Coverage,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::DivI, Metric::DivF, Metric::Repr, Metric::Coverage];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::DivI => "div_i",
            Metric::DivF => "div_f",
            Metric::Repr => "repr",
            Metric::Coverage => "cluster_coverage",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.as_str() == s || (s == "coverage" && *m == Metric::Coverage))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub covered: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub div_i: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub div_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_coverage: Option<Coverage>,
}

impl MetricReport {
    /// Scalar value of a metric; coverage is the covered cluster count.
    pub fn value(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::DivI => self.div_i,
            Metric::DivF => self.div_f,
            Metric::Repr => self.repr,
            Metric::Coverage => self.cluster_coverage.map(|c| c.covered as f64),
        }
    }
}

fn mean_pairwise(selected: &[usize], sim: impl Fn(usize, usize) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (a, &i) in selected.iter().enumerate() {
        for &j in &selected[a + 1..] {
            sum += sim(i, j);
            pairs += 1;
        }
    }
    sum / pairs as f64
}

/// `1 - mean cosine over unordered selected pairs`.
pub fn div_f(pool: &Pool, selected: &[usize]) -> Result<f64> {
    if selected.len() < 2 {
        return Err(DataError::Invalid("div_f needs at least 2 selected instances".into()).into());
    }
    Ok(1.0 - mean_pairwise(selected, |i, j| pool.similarity(i, j)))
}

/// Mean over all pool instances of the best cosine to any selected instance.
pub fn repr(pool: &Pool, selected: &[usize]) -> Result<f64> {
    if selected.is_empty() {
        return Err(DataError::Invalid("repr needs a non-empty selection".into()).into());
    }
    let best = par::map_range(pool.len(), |i| {
        selected
            .iter()
            .map(|&s| pool.similarity(i, s))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(best.iter().sum::<f64>() / pool.len() as f64)
}

fn jaccard(a: &HashSet<&str>, b: &HashSet<&str>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// `1 - mean pairwise Jaccard similarity` of whitespace token sets.
pub fn div_i(pool: &Pool, selected: &[usize]) -> Result<f64> {
    if selected.len() < 2 {
        return Err(DataError::Invalid("div_i needs at least 2 selected instances".into()).into());
    }
    let mut tokens = Vec::with_capacity(pool.len());
    tokens.resize_with(pool.len(), HashSet::new);
    for &i in selected {
        let inst = pool.get(i);
        let text = inst
            .text
            .as_deref()
            .ok_or_else(|| DataError::MissingText { id: inst.id.clone() })?;
        tokens[i] = text.split_whitespace().collect();
    }
    Ok(1.0 - mean_pairwise(selected, |i, j| jaccard(&tokens[i], &tokens[j])))
}

/// Distinct clusters among the selection versus in the whole pool, or
/// `None` when the pool carries no cluster tags.
pub fn cluster_coverage(pool: &Pool, selected: &[usize]) -> Option<Coverage> {
    let all: BTreeSet<u32> = pool.instances().iter().filter_map(|i| i.cluster).collect();
    if all.is_empty() {
        return None;
    }
    let hit: BTreeSet<u32> = selected.iter().filter_map(|&i| pool.get(i).cluster).collect();
    Some(Coverage {
        covered: hit.len(),
        total: all.len(),
    })
}

/// Computes the requested metrics for a selection given as pool positions.
pub fn compute_report(pool: &Pool, selected: &[usize], metrics: &[Metric]) -> Result<MetricReport> {
    let mut report = MetricReport::default();
    for &m in metrics {
        match m {
            Metric::DivI => report.div_i = Some(div_i(pool, selected)?),
            Metric::DivF => report.div_f = Some(div_f(pool, selected)?),
            Metric::Repr => report.repr = Some(repr(pool, selected)?),
            Metric::Coverage => report.cluster_coverage = cluster_coverage(pool, selected),
        }
    }
    Ok(report)
}
