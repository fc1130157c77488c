//! Confidence scoring: mean log-probability of a model's completion for a
//! query, given in-context demonstrations.
//!
//! Three backends ship with the crate: [`MockScorer`] (embedding based, for
//! tests and offline runs), [`TableScorer`] (precomputed
//! [`ConfidenceTable`] files) and, with the `remote` feature,
//! [`RemoteScorer`] which talks to an HTTP completion endpoint.

mod mock;
#[cfg(feature = "remote")]
mod remote;
mod table;
mod wire;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::datamodel::{Instance, Pool};
use crate::error::{DataError, Error, Result, ScoreError};

pub use mock::MockScorer;
#[cfg(feature = "remote")]
pub use remote::{RemoteConfig, RemoteScorer, ENV_LM_TOKEN, ENV_LM_URL};
pub use table::{ConfidenceTable, TableScorer, TABLE_VERSION};
pub use wire::parse_response;

/// An annotated example placed in the prompt.
#[derive(Debug, Clone, Copy)]
pub struct Demonstration<'a> {
    pub id: &'a str,
    pub input_text: &'a str,
    pub output_text: &'a str,
    pub embedding: &'a [f64],
}

/// An instance to be scored.
#[derive(Debug, Clone, Copy)]
pub struct Query<'a> {
    pub id: &'a str,
    pub input_text: &'a str,
    pub embedding: &'a [f64],
}

impl<'a> Query<'a> {
    pub fn from_instance(inst: &'a Instance) -> Self {
        Query {
            id: &inst.id,
            input_text: inst.text.as_deref().unwrap_or(""),
            embedding: &inst.embedding,
        }
    }
}

pub trait ConfidenceScorer: Send + Sync {
    /// Confidence of the model on `query`; higher is more confident.
    fn score(&self, demos: &[Demonstration<'_>], query: &Query<'_>) -> Result<f64, ScoreError>;

    /// Whether demonstrations must carry real input/output text.
    fn requires_labels(&self) -> bool {
        false
    }

    /// Upper bound on concurrent `score` calls inside [`score_pool`].
    fn max_concurrency(&self) -> usize {
        1
    }
}

/// Supplies the annotation of a selected instance.
pub trait LabelSource: Sync {
    fn label(&self, inst: &Instance) -> Option<String>;
}

/// Labels already present in the pool file.
#[derive(Debug, Clone, Copy, Default)]
pub struct PoolLabels;

impl LabelSource for PoolLabels {
    fn label(&self, inst: &Instance) -> Option<String> {
        inst.label.clone()
    }
}

impl<F> LabelSource for F
where
    F: Fn(&Instance) -> Option<String> + Sync,
{
    fn label(&self, inst: &Instance) -> Option<String> {
        self(inst)
    }
}

/// Arithmetic mean of per-token log-probabilities.
pub fn mean_logprob(token_logprobs: &[f64]) -> Result<f64, ScoreError> {
    if token_logprobs.is_empty() {
        return Err(ScoreError::EmptyGeneration);
    }
    if let Some(bad) = token_logprobs.iter().find(|x| !x.is_finite()) {
        return Err(ScoreError::Malformed(format!("non-finite logprob {bad}")));
    }
    Ok(token_logprobs.iter().sum::<f64>() / token_logprobs.len() as f64)
}

/// Labels fetched for the demonstrations of a scoring round. Holds owned
/// strings so [`Demonstration`]s can borrow them.
pub(crate) struct DemoSet {
    entries: Vec<(usize, String, String)>,
}

impl DemoSet {
    pub(crate) fn build(
        pool: &Pool,
        selected: &[usize],
        labels: &dyn LabelSource,
        strict: bool,
    ) -> Result<DemoSet> {
        let mut entries = Vec::with_capacity(selected.len());
        for &idx in selected {
            let inst = pool.get(idx);
            let label = labels.label(inst);
            if strict {
                let Some(label) = label.filter(|l| !l.is_empty()) else {
                    return Err(DataError::MissingLabel { id: inst.id.clone() }.into());
                };
                let Some(text) = inst.text.clone().filter(|t| !t.is_empty()) else {
                    return Err(DataError::MissingText { id: inst.id.clone() }.into());
                };
                entries.push((idx, text, label));
            } else {
                entries.push((
                    idx,
                    inst.text.clone().unwrap_or_default(),
                    label.unwrap_or_default(),
                ));
            }
        }
        Ok(DemoSet { entries })
    }

    pub(crate) fn demonstrations<'a>(&'a self, pool: &'a Pool) -> Vec<Demonstration<'a>> {
        self.entries
            .iter()
            .map(|(idx, input, output)| Demonstration {
                id: &pool.get(*idx).id,
                input_text: input,
                output_text: output,
                embedding: pool.embedding(*idx),
            })
            .collect()
    }
}

/// Scores each query in order. Runs up to `scorer.max_concurrency()` calls
/// at once; output order is the query order regardless. On failure the
/// error of the earliest failing query is returned.
pub fn score_queries(
    scorer: &dyn ConfidenceScorer,
    demos: &[Demonstration<'_>],
    queries: &[Query<'_>],
) -> Result<Vec<f64>> {
    let limit = scorer.max_concurrency().clamp(1, queries.len().max(1));
    let wrap = |q: &Query<'_>, e: ScoreError| Error::Score {
        id: q.id.to_string(),
        source: e,
    };
    if limit == 1 {
        return queries
            .iter()
            .map(|q| scorer.score(demos, q).map_err(|e| wrap(q, e)))
            .collect();
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<f64, ScoreError>>>> = Mutex::new(vec![None; queries.len()]);
    std::thread::scope(|s| {
        for _ in 0..limit {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= queries.len() {
                    break;
                }
                let r = scorer.score(demos, &queries[i]);
                let failed = r.is_err();
                slots.lock().unwrap()[i] = Some(r);
                if failed {
                    // Stop handing out work; queries already claimed finish.
                    next.fetch_max(queries.len(), Ordering::Relaxed);
                }
            });
        }
    });
    let slots = slots.into_inner().unwrap();
    let mut out = Vec::with_capacity(queries.len());
    for (q, slot) in queries.iter().zip(slots) {
        match slot {
            Some(Ok(v)) => out.push(v),
            Some(Err(e)) => return Err(wrap(q, e)),
            None => unreachable!("an earlier query failed"),
        }
    }
    Ok(out)
}

/// Scores every query and collects the results by id.
pub fn score_pool(
    scorer: &dyn ConfidenceScorer,
    demos: &[Demonstration<'_>],
    queries: &[Query<'_>],
) -> Result<ConfidenceTable> {
    let scores = score_queries(scorer, demos, queries)?;
    Ok(ConfidenceTable::from_pairs(
        queries.iter().map(|q| q.id.to_string()).zip(scores),
    ))
}
