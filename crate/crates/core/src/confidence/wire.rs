//! Completion endpoint wire format.

use serde::{Deserialize, Serialize};

use crate::error::ScoreError;

use super::mean_logprob;

#[derive(Serialize)]
#[cfg_attr(not(feature = "remote"), allow(dead_code))]
pub(crate) struct GenerateRequest<'a> {
    pub prompt: &'a str,
    pub max_tokens: u32,
    pub temperature: u32,
}

#[derive(Deserialize)]
struct GenerateResponse {
    #[allow(dead_code)]
    text: String,
    token_logprobs: Vec<f64>,
}

/// Confidence from a `{"text", "token_logprobs"}` response body.
pub fn parse_response(body: &str) -> Result<f64, ScoreError> {
    let resp: GenerateResponse =
        serde_json::from_str(body).map_err(|e| ScoreError::Malformed(e.to_string()))?;
    mean_logprob(&resp.token_logprobs)
}
