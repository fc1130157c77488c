//! Seeded Gaussian-mixture pools for fixtures and experiments.
//!
//! Cluster centers are standard normal vectors scaled by `separation`;
//! points are `center + spread * N(0, I)`. Each point also gets a short
//! text drawn mostly from a cluster-specific vocabulary, a `label<g>` label
//! and its cluster tag.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::datamodel::{Instance, Pool};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

const CLUSTER_WORDS: usize = 12;
const SHARED_WORDS: usize = 8;
const TEXT_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub clusters: usize,
    pub per_cluster: usize,
    pub dim: usize,
    pub spread: f64,
    pub separation: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(clusters: usize, per_cluster: usize, dim: usize, seed: u64) -> Self {
        SyntheticSpec {
            clusters,
            per_cluster,
            dim,
            spread: 0.35,
            separation: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 || self.per_cluster == 0 || self.dim == 0 {
            return Err(Error::config("clusters, per-cluster count and dim must all be ≥ 1"));
        }
        if !(self.spread.is_finite() && self.spread >= 0.0) {
            return Err(Error::config("spread must be finite and ≥ 0"));
        }
        if !(self.separation.is_finite() && self.separation > 0.0) {
            return Err(Error::config("separation must be finite and > 0"));
        }
        Ok(())
    }

    /// Raw (unnormalized) instances, cluster-major order.
    pub fn generate(&self) -> Result<Vec<Instance>> {
        self.validate()?;
        let mut rng = SeededRng::new(self.seed);
        let normal = |rng: &mut SeededRng| -> f64 { rng.inner().sample(StandardNormal) };
        let centers: Vec<Vec<f64>> = (0..self.clusters)
            .map(|_| (0..self.dim).map(|_| self.separation * normal(&mut rng)).collect())
            .collect();
        let mut out = Vec::with_capacity(self.clusters * self.per_cluster);
        for (g, center) in centers.iter().enumerate() {
            for i in 0..self.per_cluster {
                let mut embedding: Vec<f64> = center
                    .iter()
                    .map(|c| c + self.spread * normal(&mut rng))
                    .collect();
                if embedding.iter().all(|&x| x == 0.0) {
                    embedding[0] = f64::EPSILON;
                }
                let text = (0..TEXT_LEN)
                    .map(|t| {
                        if t % 4 == 3 {
                            format!("w{}", rng.below(SHARED_WORDS))
                        } else {
                            format!("c{g}w{}", rng.below(CLUSTER_WORDS))
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push(
                    Instance::new(format!("g{g}-{i}"), embedding)
                        .with_text(text)
                        .with_label(format!("label{g}"))
                        .with_cluster(g as u32),
                );
            }
        }
        Ok(out)
    }

    pub fn generate_pool(&self) -> Result<Pool> {
        Ok(Pool::new(self.generate()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let spec = SyntheticSpec::new(2, 50, 8, 3);
        let a = spec.generate().unwrap();
        assert_eq!(a.len(), 100);
        assert!(a.iter().all(|i| i.embedding.len() == 8));
        assert_eq!(a, spec.generate().unwrap());
        assert_eq!(a[60].cluster, Some(1));
        assert!(spec.generate_pool().is_ok());
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(SyntheticSpec::new(0, 5, 3, 0).generate().is_err());
        assert!(SyntheticSpec::new(2, 5, 0, 0).generate().is_err());
    }
}
