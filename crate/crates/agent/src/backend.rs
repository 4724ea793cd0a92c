//! Pluggable text-completion backends and token accounting.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    /// Chat role: "system", "user", or "assistant".
    pub role: &'static str,
    pub content: String,
}

impl Message {
    pub fn system(content: impl Into<String>) -> Message {
        Message { role: "system", content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Message {
        Message { role: "user", content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Message {
        Message { role: "assistant", content: content.into() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

impl TokenUsage {
    pub fn total(&self) -> u64 {
        self.prompt_tokens + self.completion_tokens
    }

    pub fn add(&mut self, other: TokenUsage) {
        self.prompt_tokens += other.prompt_tokens;
        self.completion_tokens += other.completion_tokens;
    }
}

impl Serialize for TokenUsage {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TokenUsage", 3)?;
        s.serialize_field("prompt_tokens", &self.prompt_tokens)?;
        s.serialize_field("completion_tokens", &self.completion_tokens)?;
        s.serialize_field("total", &self.total())?;
        s.end()
    }
}

/// Four-characters-per-token estimate used when the backend does not
/// report usage itself (scripted and replay runs).
pub fn approx_tokens(text: &str) -> u64 {
    (text.chars().count() as u64).div_ceil(4)
}

/// Estimated prompt cost of a full message list under [`approx_tokens`].
pub fn approx_prompt_tokens(messages: &[Message]) -> u64 {
    messages.iter().map(|m| approx_tokens(&m.content)).sum()
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub text: String,
    /// Provider-reported usage; `None` means the caller should estimate.
    pub usage: Option<TokenUsage>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("backend failure: {0}")]
pub struct BackendError(pub String);

/// A text-completion model: same interface whether live, scripted, or
/// replayed, so the agent loop cannot tell them apart.
pub trait Backend {
    fn complete(&mut self, messages: &[Message]) -> Result<Completion, BackendError>;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_estimate_uses_a_four_character_ceiling() {
        assert_eq!(approx_tokens(""), 0);
        assert_eq!(approx_tokens("abcd"), 1);
        assert_eq!(approx_tokens("abcde"), 2);
        assert_eq!(approx_tokens("12345678"), 2);
    }

    #[test]
    fn usage_serializes_with_a_total_field() {
        let usage = TokenUsage { prompt_tokens: 10, completion_tokens: 5 };
        assert_eq!(usage.total(), 15);
        let json = serde_json::to_string(&usage).unwrap();
        assert_eq!(json, "{\"prompt_tokens\":10,\"completion_tokens\":5,\"total\":15}");
    }
}
