//! Replay backend: feeds the (thought, action) turns of a recorded
//! transcript back through the loop, one per call. Observations come from
//! the live simulator, not the recording, so a replay checks that the
//! recorded action order still drives the world through the same states.

use crate::action::render_turn;
use crate::backend::{Backend, BackendError, Completion, Message};

/// Scan a transcript for model turns: every "Action:" marker followed by a
/// fenced blob yields one (thought, blob) pair, the thought being the text
/// after the last "Thought:" before that marker.
pub fn extract_turns(transcript: &str) -> Vec<(String, String)> {
    let mut turns = Vec::new();
    let mut rest = transcript;
    while let Some(at) = rest.find("Action:") {
        let before = &rest[..at];
        let thought = match before.rfind("Thought:") {
            Some(t) => before[t + "Thought:".len()..].trim().to_string(),
            None => String::new(),
        };
        let after = &rest[at..];
        let Some(open_rel) = after.find("```") else { break };
        let body_start = open_rel + 3;
        let Some(close_rel) = after[body_start..].find("```") else { break };
        let blob = after[body_start..body_start + close_rel].trim().to_string();
        turns.push((thought, blob));
        rest = &after[body_start + close_rel + 3..];
    }
    turns
}

pub struct ReplayBackend {
    turns: Vec<(String, String)>,
    cursor: usize,
}

impl ReplayBackend {
    pub fn from_transcript(transcript: &str) -> ReplayBackend {
        ReplayBackend { turns: extract_turns(transcript), cursor: 0 }
    }

    pub fn from_file(path: &std::path::Path) -> Result<ReplayBackend, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError(format!("cannot read transcript {}: {e}", path.display())))?;
        Ok(ReplayBackend::from_transcript(&text))
    }

    pub fn turn_count(&self) -> usize {
        self.turns.len()
    }
}

impl Backend for ReplayBackend {
    fn complete(&mut self, _messages: &[Message]) -> Result<Completion, BackendError> {
        let text = match self.turns.get(self.cursor) {
            Some((thought, blob)) => {
                self.cursor += 1;
                format!("Thought: {thought}\nAction:\n```\n{blob}\n```")
            }
            None => render_turn(
                "The recording has no further actions.",
                "Final Answer",
                "Mission aborted: replay transcript exhausted.",
            ),
        };
        Ok(Completion { text, usage: None })
    }
}
