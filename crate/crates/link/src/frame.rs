//! Wire framing: newline-delimited UTF-8 JSON objects `{kind, seq, payload}`.
//!
//! Payload text may contain newlines (dashboards, JSON observations); the
//! JSON string escaping keeps each frame on a single physical line, so a
//! plain line reader recovers frame boundaries.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Connect,
    Request,
    Response,
    Notification,
    Disconnect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub kind: FrameKind,
    /// Pairs responses with requests; notifications always carry 0.
    pub seq: u64,
    pub payload: String,
}

impl Frame {
    pub fn connect(seq: u64) -> Frame {
        Frame { kind: FrameKind::Connect, seq, payload: String::new() }
    }

    pub fn request(seq: u64, payload: impl Into<String>) -> Frame {
        Frame { kind: FrameKind::Request, seq, payload: payload.into() }
    }

    pub fn response(seq: u64, payload: impl Into<String>) -> Frame {
        Frame { kind: FrameKind::Response, seq, payload: payload.into() }
    }

    pub fn notification(payload: impl Into<String>) -> Frame {
        Frame { kind: FrameKind::Notification, seq: 0, payload: payload.into() }
    }

    pub fn disconnect(seq: u64, payload: impl Into<String>) -> Frame {
        Frame { kind: FrameKind::Disconnect, seq, payload: payload.into() }
    }

    /// One physical line, newline-terminated.
    pub fn encode(&self) -> String {
        let mut line = serde_json::to_string(self).expect("frames always serialize");
        line.push('\n');
        line
    }

    /// Parse one line (without requiring the trailing newline).
    pub fn decode(line: &str) -> Result<Frame, String> {
        serde_json::from_str(line.trim_end_matches(['\r', '\n']))
            .map_err(|e| format!("malformed frame: {e}"))
    }
}
