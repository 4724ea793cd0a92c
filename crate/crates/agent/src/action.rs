//! Parsing model output into agent actions.
//!
//! The model is instructed to reply with a thought followed by exactly one
//! fenced JSON blob carrying `action` and `action_input`. Real outputs
//! stray from that (extra prose, several fences, missing blobs), so the
//! parser takes the *last* fenced JSON object and turns everything that
//! cannot be parsed into corrective feedback for the next turn.

use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AgentAction {
    /// Write one command line to the console.
    Run(String),
    /// Sleep until the next notification.
    Sleep,
    /// Disconnect and end the run with a summary sentence.
    FinalAnswer(String),
}

/// One parsed model turn: the thought text, the raw blob (empty when no
/// fenced block was found), and either an action or the feedback line to
/// send back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTurn {
    pub thought: String,
    pub blob: String,
    pub action: Result<AgentAction, String>,
}

/// Feedback for output with no parseable action blob. Quotes the expected
/// schema once, as corrective guidance.
pub const PARSE_FEEDBACK: &str = "Could not parse an action. Respond with a single json blob: \
{\"action\": $TOOL_NAME, \"action_input\": $INPUT}, where $TOOL_NAME is one of [run, sleep, Final Answer].";

fn invalid_tool(name: &str) -> String {
    format!("{name} is not a valid tool, try one of [run, sleep].")
}

/// The last fenced block in `text`: (span before the opening fence,
/// fenced content).
fn last_fenced_block(text: &str) -> Option<(&str, &str)> {
    let fences: Vec<usize> = text.match_indices("```").map(|(i, _)| i).collect();
    if fences.len() < 2 {
        return None;
    }
    let open = fences[fences.len() - 2];
    let close = fences[fences.len() - 1];
    let mut block = &text[open + 3..close];
    // Tolerate a language tag on the opening fence ("```json").
    if let Some(first_line_end) = block.find('\n') {
        let tag = block[..first_line_end].trim();
        if tag.eq_ignore_ascii_case("json") {
            block = &block[first_line_end + 1..];
        }
    }
    Some((&text[..open], block.trim()))
}

/// The thought is whatever precedes the action block, trimmed down to the
/// text after the last "Thought:" marker (models often restate earlier
/// turns above it).
fn extract_thought(head: &str) -> String {
    let mut head = head;
    if let Some(action) = head.rfind("Action:") {
        head = &head[..action];
    }
    let thought = match head.rfind("Thought:") {
        Some(at) => &head[at + "Thought:".len()..],
        None => head,
    };
    thought.trim().to_string()
}

fn action_input_text(blob: &Value) -> String {
    match blob.get("action_input") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(text)) => text.clone(),
        Some(other) => other.to_string(),
    }
}

pub fn parse_turn(text: &str) -> ParsedTurn {
    let Some((head, block)) = last_fenced_block(text) else {
        return ParsedTurn {
            thought: extract_thought(text),
            blob: String::new(),
            action: Err(PARSE_FEEDBACK.to_string()),
        };
    };
    let thought = extract_thought(head);
    let blob = block.to_string();
    let action = match serde_json::from_str::<Value>(block) {
        Ok(value) => match value.get("action").and_then(Value::as_str) {
            Some("run") => Ok(AgentAction::Run(action_input_text(&value))),
            Some("sleep") => Ok(AgentAction::Sleep),
            Some("Final Answer") => Ok(AgentAction::FinalAnswer(action_input_text(&value))),
            Some(other) => Err(invalid_tool(other)),
            None => Err(PARSE_FEEDBACK.to_string()),
        },
        Err(_) => Err(PARSE_FEEDBACK.to_string()),
    };
    ParsedTurn { thought, blob, action }
}

/// Canonical fenced blob for an action, matching the prompt's example
/// layout (two-space indent, `action` then `action_input`).
pub fn render_blob(action: &str, input: &str) -> String {
    format!(
        "{{\n  \"action\": {},\n  \"action_input\": {}\n}}",
        serde_json::to_string(action).expect("strings serialize"),
        serde_json::to_string(input).expect("strings serialize"),
    )
}

/// A full canonical model turn: thought plus fenced action blob.
pub fn render_turn(thought: &str, action: &str, input: &str) -> String {
    format!("Thought: {thought}\nAction:\n```\n{}\n```", render_blob(action, input))
}
