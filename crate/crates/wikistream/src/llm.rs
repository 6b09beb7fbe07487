//! Chat-completion client for explanation text.
//!
//! Configured through `LLM_ENDPOINT`, `LLM_API_KEY` and `LLM_MODEL`. With
//! no endpoint the template fallback is used. `LLM_RECORDED` points at a
//! JSON object mapping prompts to canned replies, for offline runs.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;
use wikistream_core::explain::TextGenerator;

use crate::error::{Error, Result};

pub const DEFAULT_MODEL: &str = "gpt-3.5-turbo";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmConfig {
    pub endpoint: String,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
    pub model: String,
    pub timeout: Duration,
}

impl LlmConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        LlmConfig {
            endpoint: endpoint.into(),
            api_key: None,
            model: DEFAULT_MODEL.into(),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    /// `None` when `LLM_ENDPOINT` is unset or empty.
    pub fn from_env() -> Option<Self> {
        let endpoint = std::env::var("LLM_ENDPOINT")
            .ok()
            .filter(|s| !s.trim().is_empty())?;
        let mut cfg = LlmConfig::new(endpoint);
        cfg.api_key = std::env::var("LLM_API_KEY").ok().filter(|s| !s.is_empty());
        if let Ok(m) = std::env::var("LLM_MODEL") {
            if !m.is_empty() {
                cfg.model = m;
            }
        }
        Some(cfg)
    }
}

/// OpenAI-style `/chat/completions` client.
#[derive(Debug, Clone)]
pub struct HttpGenerator {
    config: LlmConfig,
    agent: ureq::Agent,
}

impl HttpGenerator {
    pub fn new(config: LlmConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(true)
            .build()
            .into();
        HttpGenerator { config, agent }
    }
}

#[derive(Deserialize)]
struct Completion {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    content: String,
}

impl TextGenerator for HttpGenerator {
    fn generate(&self, prompt: &str) -> std::result::Result<String, String> {
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut req = self.agent.post(&self.config.endpoint);
        if let Some(key) = &self.config.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let completion: Completion = req
            .send_json(&body)
            .map_err(|e| e.to_string())?
            .body_mut()
            .read_json()
            .map_err(|e| e.to_string())?;
        completion
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| "completion has no choices".to_string())
    }
}

/// Replays canned replies; unknown prompts fail, which triggers the
/// template fallback.
#[derive(Debug, Clone, Default)]
pub struct RecordedGenerator {
    replies: BTreeMap<String, String>,
    default: Option<String>,
}

impl RecordedGenerator {
    pub fn new(replies: BTreeMap<String, String>) -> Self {
        RecordedGenerator {
            replies,
            default: None,
        }
    }

    /// Answers every prompt with `reply`.
    pub fn constant(reply: impl Into<String>) -> Self {
        RecordedGenerator {
            replies: BTreeMap::new(),
            default: Some(reply.into()),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(RecordedGenerator::new(serde_json::from_str(&text)?))
    }
}

impl TextGenerator for RecordedGenerator {
    fn generate(&self, prompt: &str) -> std::result::Result<String, String> {
        self.replies
            .get(prompt)
            .or(self.default.as_ref())
            .cloned()
            .ok_or_else(|| "no recorded reply for prompt".to_string())
    }
}

pub type SharedGenerator = std::sync::Arc<dyn TextGenerator + Send + Sync>;

/// Generator selected by the environment: recorded replies, then HTTP,
/// then none.
pub fn from_env() -> Result<Option<SharedGenerator>> {
    if let Ok(path) = std::env::var("LLM_RECORDED") {
        if !path.is_empty() {
            return Ok(Some(std::sync::Arc::new(RecordedGenerator::load(
                Path::new(&path),
            )?)));
        }
    }
    Ok(
        LlmConfig::from_env()
            .map(|c| std::sync::Arc::new(HttpGenerator::new(c)) as SharedGenerator),
    )
}
