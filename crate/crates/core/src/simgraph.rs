//! Cosine similarity and the directed kNN graph.

use std::cmp::Ordering;

use serde::Serialize;

use crate::datamodel::{dot, l2_norm, Pool};
use crate::error::{DataError, Result};
use crate::par;

/// `dot(u, v) / (|u| |v|)`, clamped to `[-1, 1]`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, DataError> {
    if u.len() != v.len() {
        return Err(DataError::Invalid(format!(
            "cosine of vectors with dimensions {} and {}",
            u.len(),
            v.len()
        )));
    }
    let denom = l2_norm(u) * l2_norm(v);
    if denom == 0.0 {
        return Err(DataError::Invalid("cosine of a zero vector".into()));
    }
    Ok((dot(u, v) / denom).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub target: usize,
    pub similarity: f64,
}

/// Orders by similarity descending, then index ascending.
pub(crate) fn rank_order(a: &Edge, b: &Edge) -> Ordering {
    b.similarity
        .total_cmp(&a.similarity)
        .then(a.target.cmp(&b.target))
}

/// Directed graph where every vertex points at its `k` most similar
/// neighbors. In-edges are stored explicitly since vote scoring walks them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityGraph {
    k: usize,
    out_edges: Vec<Vec<Edge>>,
    /// Voters of each vertex, ascending.
    in_edges: Vec<Vec<usize>>,
}

impl SimilarityGraph {
    pub fn len(&self) -> usize {
        self.out_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out_edges.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, u: usize) -> &[usize] {
        &self.in_edges[u]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_edges[from].iter().any(|e| e.target == to)
    }

    /// Builds the graph from explicit out-edge lists (used by callers that
    /// compute neighbors themselves, e.g. tests or imported graphs).
    pub fn from_out_edges(k: usize, out_edges: Vec<Vec<Edge>>) -> SimilarityGraph {
        let mut in_edges = vec![Vec::new(); out_edges.len()];
        for (v, edges) in out_edges.iter().enumerate() {
            for e in edges {
                in_edges[e.target].push(v);
            }
        }
        SimilarityGraph {
            k,
            out_edges,
            in_edges,
        }
    }
}

/// Exact kNN graph by full pairwise comparison. Each vertex gets
/// `min(k, N - 1)` out-edges; ties go to the lower index.
pub fn build_knn_graph(pool: &Pool, k: usize) -> SimilarityGraph {
    let n = pool.len();
    let degree = k.min(n.saturating_sub(1));
    let out_edges = par::map_range(n, |v| {
        let mut row: Vec<Edge> = (0..n)
            .filter(|&u| u != v)
            .map(|u| Edge {
                target: u,
                similarity: pool.similarity(v, u),
            })
            .collect();
        if degree < row.len() && degree > 0 {
            row.select_nth_unstable_by(degree - 1, rank_order);
        }
        row.truncate(degree);
        row.sort_unstable_by(rank_order);
        row
    });
    SimilarityGraph::from_out_edges(k, out_edges)
}
