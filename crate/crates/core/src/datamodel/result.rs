use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DataError, Error, Result};

use super::Pool;

pub const RESULT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    VoteK,
    FastVoteK,
    Mfl,
    Diversity,
    LeastConfidence,
    Random,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::VoteK,
        Method::FastVoteK,
        Method::Mfl,
        Method::Diversity,
        Method::LeastConfidence,
        Method::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::VoteK => "vote_k",
            Method::FastVoteK => "fast_vote_k",
            Method::Mfl => "mfl",
            Method::Diversity => "diversity",
            Method::LeastConfidence => "least_confidence",
            Method::Random => "random",
        }
    }

    /// Whether the method consults a confidence scorer.
    pub fn needs_scorer(self) -> bool {
        matches!(self, Method::VoteK | Method::LeastConfidence)
    }

    /// Whether the method draws from the seeded RNG.
    pub fn is_seeded(self) -> bool {
        matches!(
            self,
            Method::Diversity | Method::LeastConfidence | Method::Random
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown method {s:?}")))
    }
}

fn default_k() -> usize {
    150
}

fn default_rho() -> f64 {
    10.0
}

/// Parameters of one selection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub method: Method,
    /// Annotation budget M.
    pub budget: usize,
    /// Out-degree of the similarity graph.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Discount base of the vote score; must exceed 1.
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub seed: u64,
    /// Graph-vote picks before the confidence pass. Defaults to
    /// `max(1, round(M / 10))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_one_count: Option<usize>,
    /// Least-confidence batch size. Defaults to the stage-one count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lc_round_size: Option<usize>,
    /// Fast vote-k variant: top-M by initial score with no discounting.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub single_pass: bool,
}

impl SelectionConfig {
    pub fn new(method: Method, budget: usize) -> Self {
        SelectionConfig {
            method,
            budget,
            k: default_k(),
            rho: default_rho(),
            seed: 0,
            stage_one_count: None,
            lc_round_size: None,
            single_pass: false,
        }
    }

    pub fn stage_one(&self) -> usize {
        self.stage_one_count
            .unwrap_or_else(|| ((self.budget as f64 / 10.0).round() as usize).max(1))
    }

    pub fn round_size(&self) -> usize {
        self.lc_round_size.unwrap_or_else(|| self.stage_one())
    }

    /// The config with every defaulted field filled in.
    pub fn resolved(&self) -> SelectionConfig {
        SelectionConfig {
            stage_one_count: Some(self.stage_one()),
            lc_round_size: Some(self.round_size()),
            ..self.clone()
        }
    }

    /// Checks the config against a pool of `pool_len` instances.
    pub fn validate(&self, pool_len: usize) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::config("budget must be ≥ 1"));
        }
        if self.budget > pool_len {
            return Err(Error::config(format!(
                "budget {} exceeds pool size {pool_len}",
                self.budget
            )));
        }
        if self.k == 0 {
            return Err(Error::config("k must be ≥ 1"));
        }
        if !(self.rho.is_finite() && self.rho > 1.0) {
            return Err(Error::config(format!("rho must be > 1, got {}", self.rho)));
        }
        let s1 = self.stage_one();
        if s1 == 0 || s1 > self.budget {
            return Err(Error::config(format!(
                "stage_one_count must be in 1..={}, got {s1}",
                self.budget
            )));
        }
        if self.round_size() == 0 {
            return Err(Error::config("lc_round_size must be ≥ 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    GraphVote,
    ConfidenceBucket,
    Greedy,
    Seed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub stage: Stage,
    /// Selector-specific score of the pick when it was made; absent for
    /// random picks.
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucket: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub version: u64,
    pub method: Method,
    pub config: SelectionConfig,
    pub selected: Vec<String>,
    pub trace: Vec<TraceEntry>,
}

impl SelectionResult {
    /// Structural checks that do not need the pool.
    pub fn validate(&self) -> Result<(), DataError> {
        if self.version != RESULT_VERSION {
            return Err(DataError::SchemaVersion {
                found: self.version,
                expected: RESULT_VERSION,
            });
        }
        let mut seen = HashSet::with_capacity(self.selected.len());
        if let Some(dup) = self.selected.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(DataError::DuplicateId { id: dup.clone() });
        }
        if self.selected.len() != self.config.budget {
            return Err(DataError::Invalid(format!(
                "{} selected ids for budget {}",
                self.selected.len(),
                self.config.budget
            )));
        }
        if self.trace.len() != self.selected.len()
            || self.trace.iter().enumerate().any(|(i, t)| t.step != i)
        {
            return Err(DataError::Invalid(
                "trace must hold one entry per selection with steps 0..M-1".into(),
            ));
        }
        Ok(())
    }

    /// Checks that every selected id exists in `pool`.
    pub fn validate_against(&self, pool: &Pool) -> Result<(), DataError> {
        self.validate()?;
        pool.positions(&self.selected).map(|_| ())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

pub fn save_result(result: &SelectionResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut body = result.to_json();
    body.push('\n');
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

pub fn load_result(path: impl AsRef<Path>) -> Result<SelectionResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_result(&text)
}

pub(crate) fn parse_result(text: &str) -> Result<SelectionResult> {
    // Check the version before the full schema so old files get a clear error.
    let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| DataError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    match raw.get("version").and_then(|v| v.as_u64()) {
        Some(RESULT_VERSION) => {}
        Some(found) => {
            return Err(DataError::SchemaVersion {
                found,
                expected: RESULT_VERSION,
            }
            .into())
        }
        None => return Err(DataError::Invalid("missing \"version\" field".into()).into()),
    }
    let result: SelectionResult = serde_json::from_value(raw).map_err(|e| DataError::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    result.validate()?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(m: usize) -> SelectionResult {
        let config = SelectionConfig::new(Method::VoteK, m).resolved();
        SelectionResult {
            version: RESULT_VERSION,
            method: Method::VoteK,
            config,
            selected: (0..m).map(|i| format!("id{i}")).collect(),
            trace: (0..m)
                .map(|i| TraceEntry {
                    step: i,
                    stage: if i < 2 { Stage::GraphVote } else { Stage::ConfidenceBucket },
                    score: Some(1.0 / (i + 1) as f64),
                    bucket: (i >= 2).then(|| i - 2),
                })
                .collect(),
        }
    }

    #[test]
    fn roundtrip_m18() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        let r = sample(18);
        save_result(&r, &p).unwrap();
        let back = load_result(&p).unwrap();
        assert_eq!(back, r);
        let steps: Vec<usize> = back.trace.iter().map(|t| t.step).collect();
        assert_eq!(steps, (0..18).collect::<Vec<_>>());
    }

    #[test]
    fn duplicate_ids_fail_to_load() {
        let mut r = sample(4);
        r.selected[3] = r.selected[0].clone();
        let err = parse_result(&r.to_json()).unwrap_err();
        assert!(matches!(err, Error::Data(DataError::DuplicateId { .. })));
    }

    #[test]
    fn version_mismatch() {
        let mut r = sample(2);
        r.version = 2;
        let err = parse_result(&r.to_json()).unwrap_err();
        assert!(matches!(err, Error::Data(DataError::SchemaVersion { found: 2, .. })));
    }

    #[test]
    fn stage_one_defaults() {
        let s1 = |m| SelectionConfig::new(Method::VoteK, m).stage_one();
        assert_eq!(
            [s1(1), s1(5), s1(10), s1(18), s1(100), s1(300), s1(800)],
            [1, 1, 1, 2, 10, 30, 80]
        );
        assert_eq!(SelectionConfig::new(Method::LeastConfidence, 18).round_size(), 2);
    }

    #[test]
    fn config_validation() {
        let mut c = SelectionConfig::new(Method::Random, 0);
        assert_eq!(
            c.validate(10).unwrap_err().to_string(),
            "invalid configuration: budget must be ≥ 1"
        );
        c.budget = 11;
        assert!(c.validate(10).is_err());
        c.budget = 5;
        c.rho = 1.0;
        assert!(c.validate(10).is_err());
        c.rho = 10.0;
        c.stage_one_count = Some(6);
        assert!(c.validate(10).is_err());
        c.stage_one_count = None;
        c.validate(10).unwrap();
    }
}
