use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::confidence::ConfidenceScorer;
use crate::datamodel::{Method, Pool, SelectionConfig};
use crate::error::{Error, Result};
use crate::selectors::run_selection;

use super::{compute_report, Metric, MetricReport};

#[derive(Debug, Clone)]
pub struct TrialOptions {
    pub trials: usize,
    pub subsample_n: usize,
    pub base_seed: u64,
    pub metrics: Vec<Metric>,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            trials: 3,
            subsample_n: 3000,
            base_seed: 0,
            metrics: vec![Metric::DivF, Metric::Repr, Metric::Coverage],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub selected: Vec<String>,
    pub report: MetricReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // Rounding can push the mean of equal values past them.
        let mean = (values.iter().sum::<f64>() / values.len() as f64).clamp(min, max);
        Some(Stat { mean, min, max })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub method: Method,
    pub budget: usize,
    pub subsample_n: usize,
    pub seeds: Vec<u64>,
    pub trials: Vec<TrialRecord>,
    pub summary: BTreeMap<String, Stat>,
}

impl TrialSummary {
    pub fn stat(&self, metric: Metric) -> Option<Stat> {
        self.summary.get(metric.as_str()).copied()
    }
}

/// Repeats subsample-then-select `trials` times.
///
/// Trial `t` uses seed `base_seed + t` both for the subsample and for the
/// selector's own randomness, so seeded baselines vary across trials while
/// deterministic selectors only see the changing subsample.
pub fn run_trials(
    pool: &Pool,
    config: &SelectionConfig,
    options: &TrialOptions,
    scorer: Option<&dyn ConfidenceScorer>,
) -> Result<TrialSummary> {
    if options.trials == 0 {
        return Err(Error::config("trials must be ≥ 1"));
    }
    if options.subsample_n == 0 || options.subsample_n > pool.len() {
        return Err(Error::config(format!(
            "subsample size {} must be in 1..={}",
            options.subsample_n,
            pool.len()
        )));
    }
    let mut records = Vec::with_capacity(options.trials);
    for t in 0..options.trials {
        let seed = options.base_seed.wrapping_add(t as u64);
        let sub = pool.subsample(options.subsample_n, seed)?;
        let cfg = SelectionConfig {
            seed,
            ..config.clone()
        };
        let result = run_selection(&sub, &cfg, scorer)?;
        let positions = sub.positions(&result.selected)?;
        let report = compute_report(&sub, &positions, &options.metrics)?;
        records.push(TrialRecord {
            trial: t,
            seed,
            selected: result.selected,
            report,
        });
    }

    let mut summary = BTreeMap::new();
    for &m in &options.metrics {
        let values: Vec<f64> = records.iter().filter_map(|r| r.report.value(m)).collect();
        if let Some(stat) = Stat::of(&values) {
            summary.insert(m.as_str().to_string(), stat);
        }
    }
    Ok(TrialSummary {
        method: config.method,
        budget: config.budget,
        subsample_n: options.subsample_n,
        seeds: records.iter().map(|r| r.seed).collect(),
        trials: records,
        summary,
    })
}
