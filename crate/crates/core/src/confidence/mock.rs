use crate::error::ScoreError;
use crate::simgraph::cosine;

use super::{ConfidenceScorer, Demonstration, Query};

/// Embedding-based stand-in for a language model.
///
/// `score = -(1 - max cos(query, demo))`, so a query identical to a
/// demonstration scores 0 and an antipodal one scores -2. With no
/// demonstrations every query scores -2.
#[derive(Debug, Clone, Copy, Default)]
pub struct MockScorer;

impl ConfidenceScorer for MockScorer {
    fn score(&self, demos: &[Demonstration<'_>], query: &Query<'_>) -> Result<f64, ScoreError> {
        let mut best = -1.0f64;
        for d in demos {
            let c = cosine(query.embedding, d.embedding)
                .map_err(|e| ScoreError::Malformed(e.to_string()))?;
            best = best.max(c);
        }
        Ok(-(1.0 - best))
    }
}
