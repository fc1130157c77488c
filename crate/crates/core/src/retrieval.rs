//! Similarity-based demonstration retrieval and token-budgeted prompt
//! assembly.
//!
//! The annotated pool is ranked by cosine similarity to the query. Examples
//! are admitted most-similar first while the whole prompt still fits the
//! budget, then emitted in ascending similarity so the closest example sits
//! right before the query.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datamodel::{dot, l2_norm, Pool};
use crate::error::{DataError, Error, Result};
use crate::simgraph::{rank_order, Edge};

pub const DEFAULT_TOKEN_BUDGET: usize = 2048;

/// Rendering of demonstrations and the query. `{input}` and `{output}` are
/// the only recognized slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub example_pattern: String,
    pub query_pattern: String,
    pub separator: String,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate {
            example_pattern: "Input: {input}\nOutput: {output}".into(),
            query_pattern: "Input: {input}\nOutput:".into(),
            separator: "\n\n".into(),
        }
    }
}

impl PromptTemplate {
    pub fn validate(&self) -> Result<()> {
        for (name, pattern, slots) in [
            ("example_pattern", &self.example_pattern, &["{input}", "{output}"][..]),
            ("query_pattern", &self.query_pattern, &["{input}"][..]),
        ] {
            if let Some(slot) = slots.iter().find(|s| !pattern.contains(*s)) {
                return Err(Error::config(format!("template {name} is missing {slot}")));
            }
        }
        Ok(())
    }

    /// Loads a template from a `.toml` or `.json` file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_toml = path.extension().is_some_and(|e| e == "toml");
        let template: PromptTemplate = if is_toml {
            toml::from_str(&text).map_err(|e| DataError::Parse {
                line: 0,
                message: e.to_string(),
            })?
        } else {
            serde_json::from_str(&text).map_err(|e| DataError::Parse {
                line: e.line(),
                message: e.to_string(),
            })?
        };
        template.validate()?;
        Ok(template)
    }

    fn render_example(&self, input: &str, output: &str) -> String {
        render(&self.example_pattern, input, Some(output))
    }

    fn render_query(&self, input: &str) -> String {
        render(&self.query_pattern, input, None)
    }
}

/// Single-pass slot substitution; slot-like text inside values is left alone.
fn render(pattern: &str, input: &str, output: Option<&str>) -> String {
    let mut out = String::with_capacity(pattern.len() + input.len() + output.map_or(0, str::len));
    let mut rest = pattern;
    while let Some(at) = rest.find('{') {
        out.push_str(&rest[..at]);
        let tail = &rest[at..];
        if let Some(r) = tail.strip_prefix("{input}") {
            out.push_str(input);
            rest = r;
        } else if let (Some(r), Some(o)) = (tail.strip_prefix("{output}"), output) {
            out.push_str(o);
            rest = r;
        } else {
            out.push('{');
            rest = &tail[1..];
        }
    }
    out.push_str(rest);
    out
}

/// Token count estimate for prompt budgeting.
pub trait TokenEstimator: Sync {
    fn estimate(&self, text: &str) -> usize;
}

/// `ceil(bytes / 4)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ByteHeuristic;

impl TokenEstimator for ByteHeuristic {
    fn estimate(&self, text: &str) -> usize {
        estimate_tokens(text)
    }
}

pub fn estimate_tokens(text: &str) -> usize {
    text.len().div_ceil(4)
}

/// Renders `(input, output)` demonstrations in the given order, then the
/// query, joined by the template separator.
pub fn assemble_prompt(
    demos: &[(&str, &str)],
    query_input: &str,
    template: &PromptTemplate,
) -> Result<String> {
    template.validate()?;
    Ok(assemble_unchecked(demos.iter().copied(), query_input, template))
}

fn assemble_unchecked<'a>(
    demos: impl Iterator<Item = (&'a str, &'a str)>,
    query_input: &str,
    template: &PromptTemplate,
) -> String {
    let mut parts: Vec<String> = demos.map(|(i, o)| template.render_example(i, o)).collect();
    parts.push(template.render_query(query_input));
    parts.join(&template.separator)
}

#[derive(Debug, Clone)]
pub struct RetrievalOptions {
    pub token_budget: usize,
    pub max_examples: Option<usize>,
    pub template: PromptTemplate,
}

impl Default for RetrievalOptions {
    fn default() -> Self {
        RetrievalOptions {
            token_budget: DEFAULT_TOKEN_BUDGET,
            max_examples: None,
            template: PromptTemplate::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievedDemo {
    pub id: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_id: Option<String>,
    /// Ascending similarity; the last entry is the closest example.
    pub demonstrations: Vec<RetrievedDemo>,
    pub prompt: String,
    pub token_estimate: usize,
}

/// Annotated pool positions ranked by similarity to `query`, most similar
/// first (ties to the lower index).
pub fn rank_by_similarity(annotated: &Pool, query: &[f64]) -> Result<Vec<Edge>> {
    if query.len() != annotated.dim() {
        return Err(DataError::DimensionMismatch {
            id: "<query>".into(),
            expected: annotated.dim(),
            found: query.len(),
        }
        .into());
    }
    let norm = l2_norm(query);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(DataError::ZeroNorm { id: "<query>".into() }.into());
    }
    let mut ranked: Vec<Edge> = (0..annotated.len())
        .map(|i| Edge {
            target: i,
            similarity: (dot(annotated.embedding(i), query) / norm).clamp(-1.0, 1.0),
        })
        .collect();
    ranked.sort_by(rank_order);
    Ok(ranked)
}

pub fn retrieve(
    annotated: &Pool,
    query_embedding: &[f64],
    query_input: &str,
    options: &RetrievalOptions,
    estimator: &dyn TokenEstimator,
) -> Result<RetrievalResult> {
    options.template.validate()?;
    let mut texts = Vec::with_capacity(annotated.len());
    for inst in annotated.instances() {
        let label = inst
            .label
            .as_deref()
            .ok_or_else(|| DataError::MissingLabel { id: inst.id.clone() })?;
        let text = inst
            .text
            .as_deref()
            .ok_or_else(|| DataError::MissingText { id: inst.id.clone() })?;
        texts.push((text, label));
    }
    let ranked = rank_by_similarity(annotated, query_embedding)?;

    let build = |count: usize| {
        let demos = ranked[..count].iter().rev().map(|e| texts[e.target]);
        assemble_unchecked(demos, query_input, &options.template)
    };

    let mut prompt = build(0);
    let mut tokens = estimator.estimate(&prompt);
    if tokens > options.token_budget {
        return Err(DataError::Invalid(format!(
            "query alone needs {tokens} tokens, budget is {}",
            options.token_budget
        ))
        .into());
    }
    let cap = options.max_examples.unwrap_or(usize::MAX).min(ranked.len());
    let mut admitted = 0;
    while admitted < cap {
        let candidate = build(admitted + 1);
        let t = estimator.estimate(&candidate);
        if t > options.token_budget {
            break;
        }
        admitted += 1;
        prompt = candidate;
        tokens = t;
    }

    Ok(RetrievalResult {
        query_id: None,
        demonstrations: ranked[..admitted]
            .iter()
            .rev()
            .map(|e| RetrievedDemo {
                id: annotated.get(e.target).id.clone(),
                similarity: e.similarity,
            })
            .collect(),
        prompt,
        token_estimate: tokens,
    })
}
