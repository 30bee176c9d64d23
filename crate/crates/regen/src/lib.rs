//! Batch regeneration of domain text through an OpenAI-compatible endpoint.
//!
//! Each source article is truncated to a per-domain word budget, filled into
//! a fixed prompt template, and sent to a completion endpoint at temperature
//! 1.0. Results are checkpointed as append-only JSON-Lines so an interrupted
//! run resumes without re-requesting finished articles.

mod client;
mod prompt;

pub use client::{regenerate_corpus, RunReport};
pub use prompt::{
    build_prompt, truncate_words, PromptError, CCNEWS_TEMPLATE, ELI5_TEMPLATE, WIKIPEDIA_TEMPLATE,
};

use serde::{Deserialize, Serialize};
use textdrift_core::corpus::Domain;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegenError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: String, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// How the completion request is shaped on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireShape {
    /// `messages: [{role: user, content: prompt}]`, completion text in
    /// `choices[0].message.content`.
    #[default]
    Chat,
    /// `prompt: prompt`, completion text in `choices[0].text`.
    Completion,
}

/// Settings for one regeneration run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegenConfig {
    pub endpoint_url: String,
    pub model_name: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
    pub parallelism: usize,
    pub domain: Domain,
    /// Words of source text fed into the prompt; 0 means title-only.
    pub word_budget: usize,
    pub wire: WireShape,
    pub max_attempts: u32,
    pub initial_backoff_ms: u64,
    pub request_timeout_secs: u64,
    /// Bearer token sent as `Authorization` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auth_token: Option<String>,
}

impl RegenConfig {
    /// Words of source text the prompt carries for each domain: 256 for
    /// Wikipedia, 180 for CCNews, title-only for ELI5.
    pub fn default_word_budget(domain: Domain) -> usize {
        match domain {
            Domain::Wikipedia => 256,
            Domain::Ccnews => 180,
            Domain::Eli5 => 0,
        }
    }

    pub fn new(
        endpoint_url: impl Into<String>,
        model_name: impl Into<String>,
        domain: Domain,
    ) -> Self {
        RegenConfig {
            endpoint_url: endpoint_url.into(),
            model_name: model_name.into(),
            temperature: 1.0,
            max_output_tokens: 2048,
            parallelism: 1,
            domain,
            word_budget: Self::default_word_budget(domain),
            wire: WireShape::Chat,
            max_attempts: 5,
            initial_backoff_ms: 500,
            request_timeout_secs: 120,
            auth_token: None,
        }
    }

    pub fn validate(&self) -> Result<(), RegenError> {
        if self.endpoint_url.trim().is_empty() {
            return Err(RegenError::Config("endpoint URL is empty".into()));
        }
        if self.model_name.trim().is_empty() {
            return Err(RegenError::Config("model name is empty".into()));
        }
        if self.parallelism == 0 {
            return Err(RegenError::Config("parallelism must be at least 1".into()));
        }
        if !(self.temperature >= 0.0) {
            return Err(RegenError::Config(format!(
                "temperature must be non-negative, got {}",
                self.temperature
            )));
        }
        if self.max_attempts == 0 {
            return Err(RegenError::Config("max_attempts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegenStatus {
    Ok,
    Failed,
    Skipped,
}

/// One line of the checkpoint: the exact prompt sent and what came back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegenRecord {
    pub article_id: String,
    pub prompt: String,
    pub completion: String,
    pub model_name: String,
    pub request_time: String,
    pub finish_reason: String,
    pub status: RegenStatus,
    pub retries: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}
