use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{DataError, Error, Result, ScoreError};

use super::{ConfidenceScorer, Demonstration, Query};

pub const TABLE_VERSION: u64 = 1;

/// Precomputed confidence per instance id.
///
/// On disk: `{"version": 1, "scores": {id: number}}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceTable {
    version: u64,
    scores: BTreeMap<String, f64>,
}

impl ConfidenceTable {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, f64)>) -> Self {
        ConfidenceTable {
            version: TABLE_VERSION,
            scores: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.scores.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            DataError::Parse { line, message } => DataError::Parse {
                line,
                message: format!("{}: {message}", path.display()),
            }
            .into(),
            other => other.into(),
        })
    }

    pub(crate) fn parse(text: &str) -> Result<Self, DataError> {
        let table: ConfidenceTable = serde_json::from_str(text).map_err(|e| DataError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if table.version != TABLE_VERSION {
            return Err(DataError::SchemaVersion {
                found: table.version,
                expected: TABLE_VERSION,
            });
        }
        if let Some((id, _)) = table.scores.iter().find(|(_, v)| !v.is_finite()) {
            return Err(DataError::NonFinite { id: id.clone() });
        }
        Ok(table)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut body = serde_json::to_string_pretty(self).expect("table serializes");
        body.push('\n');
        fs::write(path, body).map_err(|e| Error::io(path, e))
    }
}

/// Replays a [`ConfidenceTable`]; demonstrations are ignored.
#[derive(Debug, Clone)]
pub struct TableScorer {
    table: ConfidenceTable,
}

impl TableScorer {
    pub fn new(table: ConfidenceTable) -> Self {
        TableScorer { table }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ConfidenceTable::load(path).map(Self::new)
    }
}

impl ConfidenceScorer for TableScorer {
    fn score(&self, _demos: &[Demonstration<'_>], query: &Query<'_>) -> Result<f64, ScoreError> {
        self.table
            .get(query.id)
            .ok_or_else(|| ScoreError::MissingEntry(query.id.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence::score_pool;

    fn queries<'a>(ids: &'a [&'a str], emb: &'a [f64]) -> Vec<Query<'a>> {
        ids.iter()
            .map(|id| Query { id, input_text: "", embedding: emb })
            .collect()
    }

    #[test]
    fn passthrough() {
        let table = ConfidenceTable::from_pairs([("a".into(), -0.5), ("b".into(), -1.25)]);
        let scorer = TableScorer::new(table.clone());
        let got = score_pool(&scorer, &[], &queries(&["a", "b"], &[1.0])).unwrap();
        assert_eq!(got, table);
    }

    #[test]
    fn missing_id_is_named() {
        let scorer = TableScorer::new(ConfidenceTable::from_pairs([("a".into(), -0.5)]));
        let err = score_pool(&scorer, &[], &queries(&["a", "zz"], &[1.0])).unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
    }

    #[test]
    fn file_schema() {
        let t = ConfidenceTable::parse(r#"{"version":1,"scores":{"x":-0.25}}"#).unwrap();
        assert_eq!(t.get("x"), Some(-0.25));
        assert!(matches!(
            ConfidenceTable::parse(r#"{"version":3,"scores":{}}"#),
            Err(DataError::SchemaVersion { found: 3, .. })
        ));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.json");
        t.save(&p).unwrap();
        assert_eq!(ConfidenceTable::load(&p).unwrap(), t);
    }
}
