//! Reasoning-acting mission pilot: a model backend (live, scripted, or
//! replayed) drives a spacecraft console over a link, one fenced-JSON
//! action per turn, with the transcript and token usage recorded.

pub mod action;
pub mod backend;
pub mod live;
pub mod replay;
pub mod runtime;
pub mod scripted;

pub use action::{parse_turn, render_blob, render_turn, AgentAction, ParsedTurn, PARSE_FEEDBACK};
pub use backend::{
    approx_prompt_tokens, approx_tokens, Backend, BackendError, Completion, Message, TokenUsage,
};
pub use live::{LiveBackend, API_KEY_VAR, DEFAULT_ENDPOINT};
pub use replay::{extract_turns, ReplayBackend};
pub use runtime::{
    render_transcript, run_mission, RunOutcome, RunRecord, RuntimeConfig, TranscriptEntry,
    SYSTEM_PROMPT,
};
pub use scripted::{PolicyFile, PolicyRule, ScriptedBackend};
