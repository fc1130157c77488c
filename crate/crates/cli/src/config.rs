//! Settings shared by the selection-driven commands: an optional TOML or
//! JSON file, overridden field by field by command-line flags.

use std::path::{Path, PathBuf};

use annokit::confidence::{RemoteConfig, RemoteScorer};
use annokit::datamodel::{load_pool, load_pool_with_ids};
use annokit::{ConfidenceScorer, Error, Method, MockScorer, Pool, PoolFormat, Result, SelectionConfig, TableScorer};
use clap::Args;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub pool: Option<PathBuf>,
    pub format: Option<String>,
    pub ids: Option<PathBuf>,
    pub method: Option<String>,
    pub budget: Option<usize>,
    pub k: Option<usize>,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
    pub stage_one_count: Option<usize>,
    pub lc_round_size: Option<usize>,
    pub single_pass: Option<bool>,
    pub scorer: Option<String>,
    pub scores: Option<PathBuf>,
    pub lm_url: Option<String>,
    pub concurrency: Option<usize>,
}

impl FileConfig {
    /// `.json` files are parsed as JSON, everything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e })?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }
}

/// Where to read a pool from.
#[derive(Debug, Clone, Args)]
pub struct PoolArgs {
    /// Pool file (JSONL or binmat).
    #[arg(long)]
    pub pool: Option<PathBuf>,
    /// Pool format; inferred from the extension when omitted (.bin/.binmat are binmat).
    #[arg(long, value_name = "jsonl|binmat")]
    pub format: Option<String>,
    /// Sidecar id file for binmat pools, one id per line.
    #[arg(long)]
    pub ids: Option<PathBuf>,
}

impl PoolArgs {
    pub fn merged(&self, file: &FileConfig) -> PoolArgs {
        PoolArgs {
            pool: self.pool.clone().or_else(|| file.pool.clone()),
            format: self.format.clone().or_else(|| file.format.clone()),
            ids: self.ids.clone().or_else(|| file.ids.clone()),
        }
    }

    pub fn load(&self) -> Result<Pool> {
        let path = self.pool.as_deref().ok_or_else(|| Error::config("no pool given (use --pool)"))?;
        load_from(path, self.format.as_deref(), self.ids.as_deref())
    }
}

pub fn load_from(path: &Path, format: Option<&str>, ids: Option<&Path>) -> Result<Pool> {
    let format = match format {
        Some(f) => f.parse()?,
        None => PoolFormat::from_path(path),
    };
    match ids {
        Some(ids) => load_pool_with_ids(path, format, Some(ids)),
        None => load_pool(path, format),
    }
}

/// Selection and scorer flags.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Settings file (TOML, or JSON with a .json extension). Flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub pool: PoolArgs,
    /// vote_k, fast_vote_k, mfl, diversity, least_confidence or random.
    #[arg(long)]
    pub method: Option<String>,
    /// Annotation budget M.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Out-degree of the similarity graph (default 150).
    #[arg(long)]
    pub k: Option<usize>,
    /// Vote discount base (default 10).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Seed for the seeded selectors (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Vote-k stage-one picks (default max(1, round(M/10))).
    #[arg(long)]
    pub stage_one: Option<usize>,
    /// Least-confidence round size (default: the stage-one count).
    #[arg(long)]
    pub lc_round_size: Option<usize>,
    /// Fast vote-k: rank once by initial score instead of re-scoring.
    #[arg(long)]
    pub single_pass: bool,
    #[command(flatten)]
    pub scorer: ScorerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScorerArgs {
    /// Confidence scorer: mock, file or remote.
    #[arg(long, value_name = "mock|file|remote")]
    pub scorer: Option<String>,
    /// Confidence table for --scorer file.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Completion endpoint for --scorer remote (else ANNOKIT_LM_URL).
    #[arg(long)]
    pub lm_url: Option<String>,
    /// Concurrent requests for --scorer remote (default 4).
    #[arg(long)]
    pub concurrency: Option<usize>,
}

impl ScorerArgs {
    pub fn merged(&self, file: &FileConfig) -> ScorerArgs {
        ScorerArgs {
            scorer: self.scorer.clone().or_else(|| file.scorer.clone()),
            scores: self.scores.clone().or_else(|| file.scores.clone()),
            lm_url: self.lm_url.clone().or_else(|| file.lm_url.clone()),
            concurrency: self.concurrency.or(file.concurrency),
        }
    }

    /// Builds the chosen scorer; `None` when no scorer was requested.
    pub fn build(&self) -> Result<Option<Box<dyn ConfidenceScorer>>> {
        let Some(kind) = self.scorer.as_deref() else {
            return Ok(None);
        };
        let scorer: Box<dyn ConfidenceScorer> = match kind {
            "mock" => Box::new(MockScorer),
            "file" => {
                let path = self.scores.as_ref().ok_or_else(|| Error::config("--scorer file needs --scores"))?;
                Box::new(TableScorer::load(path)?)
            }
            "remote" => {
                let mut cfg = match &self.lm_url {
                    Some(url) => {
                        let mut cfg = RemoteConfig::new(url.clone());
                        cfg.token = RemoteConfig::from_env().ok().and_then(|c| c.token);
                        cfg
                    }
                    None => RemoteConfig::from_env()?,
                };
                if let Some(c) = self.concurrency {
                    if c == 0 {
                        return Err(Error::config("concurrency must be ≥ 1"));
                    }
                    cfg.concurrency = c;
                }
                Box::new(RemoteScorer::new(cfg))
            }
            other => return Err(Error::config(format!("unknown scorer {other:?} (mock, file or remote)"))),
        };
        Ok(Some(scorer))
    }
}

/// Fully merged settings for one selection run.
pub struct RunConfig {
    pub pool: PoolArgs,
    pub selection: SelectionConfig,
    pub scorer: ScorerArgs,
}

impl RunArgs {
    pub fn file(&self) -> Result<FileConfig> {
        match &self.config {
            Some(path) => FileConfig::load(path),
            None => Ok(FileConfig::default()),
        }
    }

    /// Merges file and flags and checks everything that does not depend
    /// on the pool size.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = self.file()?;
        let method: Method = self
            .method
            .as_deref()
            .or(file.method.as_deref())
            .ok_or_else(|| Error::config("no method given (use --method)"))?
            .parse()?;
        let budget = self
            .budget
            .or(file.budget)
            .ok_or_else(|| Error::config("no budget given (use --budget)"))?;
        let base = SelectionConfig::new(method, budget);
        let selection = SelectionConfig {
            k: self.k.or(file.k).unwrap_or(base.k),
            rho: self.rho.or(file.rho).unwrap_or(base.rho),
            seed: self.seed.or(file.seed).unwrap_or(base.seed),
            stage_one_count: self.stage_one.or(file.stage_one_count),
            lc_round_size: self.lc_round_size.or(file.lc_round_size),
            single_pass: self.single_pass || file.single_pass.unwrap_or(false),
            ..base
        };
        selection.validate(usize::MAX)?;
        if selection.single_pass && method != Method::FastVoteK {
            return Err(Error::config("--single-pass only applies to fast_vote_k"));
        }
        let scorer = self.scorer.merged(&file);
        if method.needs_scorer() && scorer.scorer.is_none() {
            return Err(Error::config(format!("method {method} needs a scorer (use --scorer)")));
        }
        Ok(RunConfig {
            pool: self.pool.merged(&file),
            selection,
            scorer,
        })
    }
}
