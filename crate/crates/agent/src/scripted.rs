//! Deterministic scripted policies: an ordered list of (guard, thought,
//! action) rules loaded from JSON, so CI policies are data, not code.
//!
//! Each call consumes the next rule after checking its `expect` guard
//! against the latest console observation. A failed guard or an exhausted
//! script emits a failure Final Answer, making the policy total over every
//! reachable observation.

use serde::Deserialize;

use crate::action::render_turn;
use crate::backend::{Backend, BackendError, Completion, Message};

#[derive(Clone, Debug, Deserialize)]
pub struct PolicyRule {
    /// Substring the latest observation must contain for the rule to fire.
    #[serde(default)]
    pub expect: Option<String>,
    pub thought: String,
    /// "run", "sleep", or "Final Answer".
    pub action: String,
    #[serde(default)]
    pub input: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PolicyFile {
    pub rules: Vec<PolicyRule>,
}

pub struct ScriptedBackend {
    rules: Vec<PolicyRule>,
    cursor: usize,
}

impl ScriptedBackend {
    pub fn new(rules: Vec<PolicyRule>) -> ScriptedBackend {
        ScriptedBackend { rules, cursor: 0 }
    }

    pub fn from_json(text: &str) -> Result<ScriptedBackend, BackendError> {
        let file: PolicyFile = serde_json::from_str(text)
            .map_err(|e| BackendError(format!("invalid policy file: {e}")))?;
        Ok(ScriptedBackend::new(file.rules))
    }

    pub fn from_file(path: &std::path::Path) -> Result<ScriptedBackend, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError(format!("cannot read policy {}: {e}", path.display())))?;
        ScriptedBackend::from_json(&text)
    }
}

impl Backend for ScriptedBackend {
    fn complete(&mut self, messages: &[Message]) -> Result<Completion, BackendError> {
        let latest = messages
            .iter()
            .rev()
            .find(|m| m.role == "user")
            .map(|m| m.content.as_str())
            .unwrap_or("");

        let step = self.cursor + 1;
        let text = match self.rules.get(self.cursor) {
            None => render_turn(
                "No scripted action remains.",
                "Final Answer",
                &format!("Mission aborted: policy exhausted after {} steps.", self.rules.len()),
            ),
            Some(rule) => {
                if let Some(pattern) = &rule.expect {
                    if !latest.contains(pattern.as_str()) {
                        self.cursor = self.rules.len();
                        return Ok(Completion {
                            text: render_turn(
                                &format!(
                                    "Expected the console output to contain '{pattern}', but it does not."
                                ),
                                "Final Answer",
                                &format!("Mission aborted: unexpected observation at step {step}."),
                            ),
                            usage: None,
                        });
                    }
                }
                self.cursor += 1;
                render_turn(&rule.thought, &rule.action, &rule.input)
            }
        };
        Ok(Completion { text, usage: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const POLICY: &str = r#"{
        "rules": [
            {"thought": "Check the clock.", "action": "run", "input": "get_ut"},
            {"expect": "2045-", "thought": "Done.", "action": "Final Answer", "input": "done"}
        ]
    }"#;

    #[test]
    fn rules_fire_in_order_and_render_canonical_turns() {
        let mut backend = ScriptedBackend::from_json(POLICY).unwrap();
        let first = backend.complete(&[Message::user("dashboard")]).unwrap();
        assert_eq!(
            first.text,
            "Thought: Check the clock.\nAction:\n```\n{\n  \"action\": \"run\",\n  \"action_input\": \"get_ut\"\n}\n```"
        );
        let second = backend.complete(&[Message::user("2045-01-03T19:29:40.334702")]).unwrap();
        assert!(second.text.contains("\"action\": \"Final Answer\""));
    }

    #[test]
    fn a_failed_guard_aborts_with_a_failure_final_answer() {
        let mut backend = ScriptedBackend::from_json(POLICY).unwrap();
        backend.complete(&[Message::user("dashboard")]).unwrap();
        let reply = backend.complete(&[Message::user("Unknown command")]).unwrap();
        assert!(reply.text.contains("Mission aborted: unexpected observation at step 2."));
        // The policy stays in the aborted state afterwards.
        let next = backend.complete(&[Message::user("anything")]).unwrap();
        assert!(next.text.contains("Mission aborted: policy exhausted"));
    }

    #[test]
    fn identical_inputs_give_identical_outputs() {
        let mut a = ScriptedBackend::from_json(POLICY).unwrap();
        let mut b = ScriptedBackend::from_json(POLICY).unwrap();
        let messages = [Message::user("dashboard")];
        assert_eq!(a.complete(&messages).unwrap().text, b.complete(&messages).unwrap().text);
    }
}
