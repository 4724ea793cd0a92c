//! The reasoning-acting loop: prompt assembly, action dispatch over the
//! console link, transcript recording, and token accounting.

use std::time::Duration;

use llmsat_link::{ConsoleLink, LinkError};

use crate::action::{parse_turn, AgentAction};
use crate::backend::{approx_prompt_tokens, approx_tokens, Backend, Message, TokenUsage};

/// Piloting instructions sent as the system message, verbatim, tool list
/// included.
pub const SYSTEM_PROMPT: &str = include_str!("system_prompt.txt");

#[derive(Clone, Debug)]
pub struct RuntimeConfig {
    /// Model calls before the run is halted as a runaway loop.
    pub max_steps: usize,
    /// Attempts per model call before the run aborts as errored.
    pub retries: u32,
}

impl Default for RuntimeConfig {
    fn default() -> RuntimeConfig {
        RuntimeConfig { max_steps: 60, retries: 3 }
    }
}

/// How a run ended. Only `FinalAnswer` can ever count as mission success;
/// the rest are failure modes the evaluators and reports distinguish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    FinalAnswer(String),
    /// Slept with no scheduled wakeup.
    Deadlock,
    /// Hit the max_steps cap without a final answer.
    StepLimit,
    /// The console link failed mid-run.
    TransportError(String),
    /// The model backend failed after all retries.
    BackendError(String),
}

#[derive(Clone, Debug)]
pub struct TranscriptEntry {
    pub thought: String,
    /// Fenced action blob; empty when the output had no parseable block.
    pub blob: String,
    /// Console observation or corrective feedback; `None` on the final
    /// answer, which ends the exchange.
    pub observation: Option<String>,
    pub usage: TokenUsage,
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub entries: Vec<TranscriptEntry>,
    pub outcome: RunOutcome,
    pub usage: TokenUsage,
    /// Model calls made (parse failures included).
    pub steps: usize,
}

impl RunRecord {
    pub fn succeeded_with_final_answer(&self) -> bool {
        matches!(self.outcome, RunOutcome::FinalAnswer(_))
    }
}

/// Render the transcript in the layout the prompt teaches the model:
/// repeated Thought / Action / Observation blocks.
pub fn render_transcript(record: &RunRecord) -> String {
    let mut text = String::new();
    for entry in &record.entries {
        text.push_str("Thought: ");
        text.push_str(&entry.thought);
        text.push('\n');
        if !entry.blob.is_empty() {
            text.push_str("Action:\n```\n");
            text.push_str(&entry.blob);
            text.push_str("\n```\n");
        }
        if let Some(observation) = &entry.observation {
            text.push_str("Observation: ");
            text.push_str(observation);
            text.push('\n');
        }
    }
    text
}

fn complete_with_retry(
    backend: &mut dyn Backend,
    messages: &[Message],
    retries: u32,
) -> Result<crate::backend::Completion, String> {
    let mut last_error = String::new();
    for attempt in 0..retries.max(1) {
        if attempt > 0 {
            std::thread::sleep(Duration::from_millis(50 * u64::from(attempt)));
        }
        match backend.complete(messages) {
            Ok(completion) => return Ok(completion),
            Err(e) => last_error = e.to_string(),
        }
    }
    Err(last_error)
}

/// Run one mission: connect, loop Thought/Action/Observation until a final
/// answer, a failure mode, or the step cap.
pub fn run_mission(
    backend: &mut dyn Backend,
    link: &mut dyn ConsoleLink,
    config: &RuntimeConfig,
) -> RunRecord {
    let mut record =
        RunRecord { entries: Vec::new(), outcome: RunOutcome::StepLimit, usage: TokenUsage::default(), steps: 0 };

    let dashboard = match link.connect() {
        Ok(dashboard) => dashboard,
        Err(e) => {
            record.outcome = RunOutcome::TransportError(e.to_string());
            return record;
        }
    };
    let mut messages = vec![Message::system(SYSTEM_PROMPT), Message::user(dashboard)];

    while record.steps < config.max_steps {
        let completion = match complete_with_retry(backend, &messages, config.retries) {
            Ok(completion) => completion,
            Err(reason) => {
                record.outcome = RunOutcome::BackendError(reason);
                break;
            }
        };
        record.steps += 1;
        let usage = completion.usage.unwrap_or_else(|| TokenUsage {
            prompt_tokens: approx_prompt_tokens(&messages),
            completion_tokens: approx_tokens(&completion.text),
        });
        record.usage.add(usage);

        let turn = parse_turn(&completion.text);
        messages.push(Message::assistant(completion.text.clone()));

        let mut entry = TranscriptEntry {
            thought: turn.thought,
            blob: turn.blob,
            observation: None,
            usage,
        };

        match turn.action {
            Err(feedback) => {
                entry.observation = Some(feedback.clone());
                messages.push(Message::user(feedback));
                record.entries.push(entry);
            }
            Ok(AgentAction::Run(line)) => match link.request(&line) {
                Ok(observation) => {
                    entry.observation = Some(observation.clone());
                    messages.push(Message::user(observation));
                    record.entries.push(entry);
                }
                Err(e) => {
                    entry.observation = Some(e.to_string());
                    record.entries.push(entry);
                    record.outcome = RunOutcome::TransportError(e.to_string());
                    break;
                }
            },
            Ok(AgentAction::Sleep) => match link.await_event(None) {
                Ok(notification) => {
                    entry.observation = Some(notification.clone());
                    messages.push(Message::user(notification));
                    record.entries.push(entry);
                }
                Err(LinkError::Deadlock) => {
                    entry.observation = Some(LinkError::Deadlock.to_string());
                    record.entries.push(entry);
                    record.outcome = RunOutcome::Deadlock;
                    break;
                }
                Err(e) => {
                    entry.observation = Some(e.to_string());
                    record.entries.push(entry);
                    record.outcome = RunOutcome::TransportError(e.to_string());
                    break;
                }
            },
            Ok(AgentAction::FinalAnswer(answer)) => {
                record.entries.push(entry);
                let _ = link.disconnect();
                record.outcome = RunOutcome::FinalAnswer(answer);
                break;
            }
        }
    }

    if record.outcome == RunOutcome::StepLimit {
        let _ = link.disconnect();
    }
    record
}
