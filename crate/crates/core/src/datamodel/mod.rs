//! Instances, pools and selection results.

mod io;
mod result;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{DataError, Error, Result};
use crate::rng::SeededRng;

pub use io::{load_pool, load_pool_with_ids, pool_to_jsonl, save_pool_binmat, save_pool_jsonl, PoolFormat, BINMAT_MAGIC};
pub use result::{
    load_result, save_result, Method, SelectionConfig, SelectionResult, Stage, TraceEntry,
    RESULT_VERSION,
};

/// One unlabeled (or labeled) example with its embedding.
///
/// Inside a [`Pool`] the embedding is unit-norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Ground-truth cluster tag written by the synthetic generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<u32>,
    pub embedding: Vec<f64>,
}

impl Instance {
    pub fn new(id: impl Into<String>, embedding: Vec<f64>) -> Self {
        Instance {
            id: id.into(),
            text: None,
            label: None,
            cluster: None,
            embedding,
        }
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_cluster(mut self, cluster: u32) -> Self {
        self.cluster = Some(cluster);
        self
    }
}

/// Ordered, validated set of instances sharing one embedding dimension.
///
/// Immutable once built. Embeddings are L2-normalized at construction, so
/// cosine similarity between members is a plain dot product.
#[derive(Debug, Clone, PartialEq)]
pub struct Pool {
    instances: Vec<Instance>,
    dim: usize,
    index: HashMap<String, usize>,
}

impl Pool {
    /// Validates and normalizes `instances`. Reports the first violation.
    pub fn new(mut instances: Vec<Instance>) -> Result<Pool, DataError> {
        let dim = match instances.first() {
            Some(first) => first.embedding.len(),
            None => return Err(DataError::EmptyPool),
        };
        let mut index = HashMap::with_capacity(instances.len());
        for (pos, inst) in instances.iter_mut().enumerate() {
            validate_embedding(inst, dim)?;
            if index.insert(inst.id.clone(), pos).is_some() {
                return Err(DataError::DuplicateId {
                    id: inst.id.clone(),
                });
            }
            normalize(&mut inst.embedding);
        }
        Ok(Pool {
            instances,
            dim,
            index,
        })
    }

    /// Builds a pool from members of an existing pool; embeddings are
    /// already unit-norm and are not renormalized.
    fn from_normalized(instances: Vec<Instance>, dim: usize) -> Pool {
        let index = instances
            .iter()
            .enumerate()
            .map(|(i, inst)| (inst.id.clone(), i))
            .collect();
        Pool {
            instances,
            dim,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    /// Always false; pools hold at least one instance.
    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn get(&self, index: usize) -> &Instance {
        &self.instances[index]
    }

    pub fn embedding(&self, index: usize) -> &[f64] {
        &self.instances[index].embedding
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.instances.iter().map(|i| i.id.as_str())
    }

    /// Maps ids to pool positions, failing on the first unknown id.
    pub fn positions<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>, DataError> {
        ids.iter()
            .map(|id| {
                let id = id.as_ref();
                self.position(id)
                    .ok_or_else(|| DataError::UnknownId { id: id.to_string() })
            })
            .collect()
    }

    /// Cosine similarity between two members, clamped to `[-1, 1]`.
    pub fn similarity(&self, a: usize, b: usize) -> f64 {
        dot(self.embedding(a), self.embedding(b)).clamp(-1.0, 1.0)
    }

    /// Sub-pool of the given positions, in the order given.
    pub fn select(&self, positions: &[usize]) -> Pool {
        let instances = positions.iter().map(|&p| self.instances[p].clone()).collect();
        Pool::from_normalized(instances, self.dim)
    }

    /// `n` distinct instances drawn uniformly without replacement, kept in
    /// their original relative order.
    pub fn subsample(&self, n: usize, seed: u64) -> Result<Pool> {
        if n == 0 || n > self.len() {
            return Err(Error::config(format!(
                "subsample size {n} must be in 1..={}",
                self.len()
            )));
        }
        let mut picks = SeededRng::new(seed).sample_indices(self.len(), n);
        picks.sort_unstable();
        Ok(self.select(&picks))
    }
}

fn validate_embedding(inst: &Instance, dim: usize) -> Result<(), DataError> {
    let found = inst.embedding.len();
    if found == 0 {
        return Err(DataError::EmptyEmbedding {
            id: inst.id.clone(),
        });
    }
    if found != dim {
        return Err(DataError::DimensionMismatch {
            id: inst.id.clone(),
            expected: dim,
            found,
        });
    }
    if inst.embedding.iter().any(|x| !x.is_finite()) {
        return Err(DataError::NonFinite {
            id: inst.id.clone(),
        });
    }
    let norm = l2_norm(&inst.embedding);
    if norm == 0.0 || !norm.is_finite() {
        return Err(DataError::ZeroNorm {
            id: inst.id.clone(),
        });
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn normalize(v: &mut [f64]) {
    let norm = l2_norm(v);
    v.iter_mut().for_each(|x| *x /= norm);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool_of(n: usize) -> Pool {
        Pool::new(
            (0..n)
                .map(|i| Instance::new(format!("p{i}"), vec![1.0, i as f64]))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn normalizes_on_construction() {
        let pool = Pool::new(vec![Instance::new("a", vec![3.0, 4.0])]).unwrap();
        assert_eq!(pool.embedding(0), &[0.6, 0.8]);
        assert_eq!(pool.dim(), 2);
    }

    #[test]
    fn rejects_bad_instances() {
        let zero = Pool::new(vec![Instance::new("a", vec![0.0, 0.0])]).unwrap_err();
        assert_eq!(zero.to_string(), "zero-norm embedding at id a");

        let nan = Pool::new(vec![Instance::new("b", vec![f64::NAN, 1.0])]).unwrap_err();
        assert_eq!(nan, DataError::NonFinite { id: "b".into() });

        let dims = Pool::new(vec![
            Instance::new("a", vec![1.0, 0.0]),
            Instance::new("b", vec![1.0]),
        ])
        .unwrap_err();
        assert!(matches!(dims, DataError::DimensionMismatch { found: 1, .. }));

        let dup = Pool::new(vec![
            Instance::new("a", vec![1.0]),
            Instance::new("a", vec![2.0]),
        ])
        .unwrap_err();
        assert_eq!(dup, DataError::DuplicateId { id: "a".into() });

        assert_eq!(Pool::new(vec![]).unwrap_err(), DataError::EmptyPool);
    }

    #[test]
    fn subsample_full_keeps_ids() {
        let pool = pool_of(10);
        let sub = pool.subsample(10, 99).unwrap();
        assert_eq!(sub, pool);
    }

    #[test]
    fn subsample_is_deterministic_and_ordered() {
        let pool = pool_of(50);
        let a = pool.subsample(3, 7).unwrap();
        let b = pool.subsample(3, 7).unwrap();
        assert_eq!(a.ids().collect::<Vec<_>>(), b.ids().collect::<Vec<_>>());
        let pos: Vec<usize> = a.ids().map(|id| pool.position(id).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn subsample_large_pool_distinct() {
        let pool = pool_of(10_000);
        let sub = pool.subsample(3000, 5).unwrap();
        let ids: std::collections::HashSet<&str> = sub.ids().collect();
        assert_eq!(ids.len(), 3000);
    }

    #[test]
    fn subsample_rejects_oversize() {
        assert!(matches!(pool_of(4).subsample(5, 0), Err(Error::Config(_))));
    }

    #[test]
    fn subsample_single_draw_is_uniform() {
        let pool = pool_of(4);
        let mut counts = [0usize; 4];
        for seed in 0..10_000u64 {
            let sub = pool.subsample(1, seed).unwrap();
            counts[pool.position(&sub.get(0).id).unwrap()] += 1;
        }
        // binomial(10000, 1/4): sigma = sqrt(10000 * 0.25 * 0.75)
        let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - 2500.0).abs() < 5.0 * sigma, "{counts:?}");
        }
    }
}
