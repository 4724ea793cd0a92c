//! Live chat-completion backend over HTTPS.
//!
//! Credentials come only from the `OPENAI_API_KEY` environment variable —
//! never from flags or config files. Endpoint, model id, and temperature
//! are configuration.

use serde::Deserialize;
use serde_json::json;

use crate::backend::{Backend, BackendError, Completion, Message, TokenUsage};

pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";
pub const API_KEY_VAR: &str = "OPENAI_API_KEY";

pub struct LiveBackend {
    client: reqwest::blocking::Client,
    endpoint: String,
    model: String,
    temperature: f64,
    api_key: String,
}

#[derive(Deserialize)]
struct ApiChoice {
    message: ApiMessage,
}

#[derive(Deserialize)]
struct ApiMessage {
    content: String,
}

#[derive(Deserialize)]
struct ApiUsage {
    prompt_tokens: u64,
    completion_tokens: u64,
}

#[derive(Deserialize)]
struct ApiResponse {
    choices: Vec<ApiChoice>,
    usage: Option<ApiUsage>,
}

impl LiveBackend {
    /// Build a live backend, reading the API key from the environment.
    pub fn from_env(
        endpoint: Option<String>,
        model: String,
        temperature: f64,
    ) -> Result<LiveBackend, BackendError> {
        let api_key = std::env::var(API_KEY_VAR)
            .map_err(|_| BackendError(format!("{API_KEY_VAR} environment variable not set")))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(std::time::Duration::from_secs(120))
            .build()
            .map_err(|e| BackendError(e.to_string()))?;
        Ok(LiveBackend {
            client,
            endpoint: endpoint.unwrap_or_else(|| DEFAULT_ENDPOINT.to_string()),
            model,
            temperature,
            api_key,
        })
    }
}

impl Backend for LiveBackend {
    fn complete(&mut self, messages: &[Message]) -> Result<Completion, BackendError> {
        let body = json!({
            "model": self.model,
            "temperature": self.temperature,
            "messages": messages
                .iter()
                .map(|m| json!({"role": m.role, "content": m.content}))
                .collect::<Vec<_>>(),
        });
        let response = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| BackendError(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            let detail = response.text().unwrap_or_default();
            let excerpt: String = detail.chars().take(400).collect();
            return Err(BackendError(format!("HTTP {status}: {excerpt}")));
        }
        let parsed: ApiResponse =
            response.json().map_err(|e| BackendError(format!("bad response body: {e}")))?;
        let choice = parsed
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| BackendError("response carried no choices".to_string()))?;
        Ok(Completion {
            text: choice.message.content,
            usage: parsed.usage.map(|u| TokenUsage {
                prompt_tokens: u.prompt_tokens,
                completion_tokens: u.completion_tokens,
            }),
        })
    }
}
