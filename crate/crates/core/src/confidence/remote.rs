use std::time::Duration;


use crate::error::{Error, Result, ScoreError};
use crate::retrieval::{assemble_prompt, PromptTemplate};

use super::wire::{parse_response, GenerateRequest};
use super::{ConfidenceScorer, Demonstration, Query};

pub const ENV_LM_URL: &str = "ANNOKIT_LM_URL";
pub const ENV_LM_TOKEN: &str = "ANNOKIT_LM_TOKEN";

#[derive(Debug, Clone)]
pub struct RemoteConfig {
    pub url: String,
    pub token: Option<String>,
    pub max_tokens: u32,
    pub concurrency: usize,
    pub timeout: Duration,
    pub template: PromptTemplate,
}

impl RemoteConfig {
    pub fn new(url: impl Into<String>) -> Self {
        RemoteConfig {
            url: url.into(),
            token: None,
            max_tokens: 64,
            concurrency: 4,
            timeout: Duration::from_secs(120),
            template: PromptTemplate::default(),
        }
    }

    /// Reads the endpoint from `ANNOKIT_LM_URL` and an optional bearer token
    /// from `ANNOKIT_LM_TOKEN`.
    pub fn from_env() -> Result<Self> {
        let url = std::env::var(ENV_LM_URL)
            .map_err(|_| Error::config(format!("{ENV_LM_URL} is not set")))?;
        let mut cfg = RemoteConfig::new(url);
        cfg.token = std::env::var(ENV_LM_TOKEN).ok().filter(|t| !t.is_empty());
        Ok(cfg)
    }
}


/// Scores queries with a completion endpoint. Greedy decoding
/// (`temperature: 0`); confidence is the mean log-probability of the
/// generated tokens.
pub struct RemoteScorer {
    config: RemoteConfig,
    agent: ureq::Agent,
}

impl RemoteScorer {
    pub fn new(config: RemoteConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        RemoteScorer { config, agent }
    }

    pub fn prompt_for(&self, demos: &[Demonstration<'_>], query: &Query<'_>) -> Result<String> {
        let pairs: Vec<(&str, &str)> = demos.iter().map(|d| (d.input_text, d.output_text)).collect();
        assemble_prompt(&pairs, query.input_text, &self.config.template)
    }
}


impl ConfidenceScorer for RemoteScorer {
    fn score(&self, demos: &[Demonstration<'_>], query: &Query<'_>) -> Result<f64, ScoreError> {
        let prompt = self
            .prompt_for(demos, query)
            .map_err(|e| ScoreError::Malformed(e.to_string()))?;
        let body = GenerateRequest {
            prompt: &prompt,
            max_tokens: self.config.max_tokens,
            temperature: 0,
        };
        let mut req = self.agent.post(&self.config.url);
        if let Some(token) = &self.config.token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| ScoreError::Transport(e.to_string()))?;
        let status = resp.status();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ScoreError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(ScoreError::Transport(format!("HTTP {status}: {text}")));
        }
        parse_response(&text)
    }

    fn requires_labels(&self) -> bool {
        true
    }

    fn max_concurrency(&self) -> usize {
        self.config.concurrency.max(1)
    }
}
