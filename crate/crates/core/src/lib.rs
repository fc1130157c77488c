//! Annotation-efficient example selection for in-context learning.
//!
//! The crate covers the full offline pipeline:
//!
//! - [`datamodel`]: pools of embedded instances, file ingestion, subsampling
//!   and the [`SelectionResult`] document.
//! - [`simgraph`]: cosine similarity and the directed kNN graph.
//! - [`selectors`]: vote-k, fast vote-k, facility location, embedding
//!   diversity, least-confidence and random selection.
//! - [`confidence`]: the pluggable mean log-probability scorer.
//! - [`retrieval`]: similarity-ranked demonstrations packed into a token budget.
//! - [`metrics`]: diversity / representativeness metrics and the trial harness.
//!
//! Embeddings are computed elsewhere and ingested as files. Every selector is
//! deterministic given its inputs and seed.

pub mod confidence;
pub mod datamodel;
pub mod error;
pub mod metrics;
mod par;
pub mod retrieval;
pub mod rng;
pub mod selectors;
pub mod simgraph;

pub use confidence::{ConfidenceScorer, ConfidenceTable, Demonstration, MockScorer, Query, TableScorer};
pub use datamodel::{
    Instance, Method, Pool, PoolFormat, SelectionConfig, SelectionResult, Stage, TraceEntry,
};
pub use error::{DataError, Error, Result, ScoreError};
pub use retrieval::{PromptTemplate, RetrievalOptions, RetrievalResult};
pub use selectors::{run_selection, run_selection_with};
pub use simgraph::{build_knn_graph, cosine, SimilarityGraph};
