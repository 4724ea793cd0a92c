//! Batch execution: isolated worlds per run, derived seeds, transcript and
//! usage capture, and abort handling when a backend gives out mid-batch.

use std::fs;
use std::path::{Path, PathBuf};

use llmsat_agent::{
    render_transcript, run_mission, Backend, LiveBackend, ReplayBackend,
    RunOutcome, RunRecord, RuntimeConfig, ScriptedBackend,
};
use llmsat_link::{ConsoleServer, LoopbackLink, SocketClient};
use llmsat_sim::Session;
use serde::Serialize;

use crate::evaluate::{evaluate, Evaluation};
use crate::scenario::ScenarioId;

/// How agent completions are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Live,
    Scripted,
    Replay,
}

impl BackendKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::Live => "live",
            BackendKind::Scripted => "scripted",
            BackendKind::Replay => "replay",
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<BackendKind, String> {
        match s {
            "live" => Ok(BackendKind::Live),
            "scripted" => Ok(BackendKind::Scripted),
            "replay" => Ok(BackendKind::Replay),
            other => Err(format!(
                "unknown backend '{other}' (expected live, scripted, or replay)"
            )),
        }
    }
}

/// Everything a batch needs; assembled from CLI flags and the config file.
#[derive(Clone, Debug)]
pub struct BatchSettings {
    pub scenario: ScenarioId,
    pub runs: u64,
    pub backend: BackendKind,
    pub model: String,
    pub temperature: f64,
    pub seed: u64,
    pub latency: f64,
    pub noise: f64,
    pub out_dir: PathBuf,
    /// Drive the console in-process instead of over a localhost socket.
    pub loopback: bool,
    /// Bind address for the console server when not in loopback mode.
    pub addr: String,
    /// Scripted-policy file; defaults to the bundled policy per scenario.
    pub policy: Option<PathBuf>,
    /// Replay transcript file; scenario A has a bundled default.
    pub replay: Option<PathBuf>,
    pub max_steps: u64,
}

impl BatchSettings {
    pub fn new(scenario: ScenarioId) -> BatchSettings {
        BatchSettings {
            scenario,
            runs: 1,
            backend: BackendKind::Scripted,
            model: "gpt-4-1106-preview".to_string(),
            temperature: 0.7,
            seed: 0,
            latency: llmsat_sim::DEFAULT_LATENCY,
            noise: 0.0,
            out_dir: PathBuf::from("runs"),
            loopback: false,
            addr: "127.0.0.1:0".to_string(),
            policy: None,
            replay: None,
            max_steps: 60,
        }
    }
}

/// 64-bit FNV-1a over a byte slice.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Per-run seed: reproducible from the batch seed, distinct per index.
pub fn derive_run_seed(batch_seed: u64, run_index: u64) -> u64 {
    let mut bytes = [0u8; 16];
    bytes[..8].copy_from_slice(&batch_seed.to_le_bytes());
    bytes[8..].copy_from_slice(&run_index.to_le_bytes());
    fnv1a64(&bytes)
}

/// The scripted policy shipped with the harness for each scenario.
pub fn bundled_policy(scenario: ScenarioId) -> &'static str {
    match scenario {
        ScenarioId::A => include_str!("../fixtures/scenario_a.json"),
        ScenarioId::B => include_str!("../fixtures/scenario_b.json"),
        ScenarioId::C => include_str!("../fixtures/scenario_c_safe.json"),
    }
}

/// A recorded session transcript bundled for replay, where one exists.
pub fn bundled_replay(scenario: ScenarioId) -> Option<&'static str> {
    match scenario {
        ScenarioId::A => {
            Some(include_str!("../fixtures/replay_scenario_a_run1.txt"))
        }
        _ => None,
    }
}

/// One row of the batch report.
#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    pub scenario: String,
    pub run_index: u64,
    pub seed: u64,
    pub success: bool,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
    pub steps: u64,
    /// Evaluator's one-line explanation (the report's Observations column).
    pub observations: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_reason: Option<String>,
    /// Scenario C: message text surfaced for human review.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
    pub transcript_path: String,
}

/// A finished run: the report row plus the full agent record behind it.
pub struct CompletedRun {
    pub result: RunResult,
    pub record: RunRecord,
}

#[derive(Debug)]
pub enum BatchError {
    /// Backend could not even be constructed (bad policy file, missing key).
    Setup(String),
    Io(std::io::Error),
}

impl std::fmt::Display for BatchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BatchError::Setup(msg) => write!(f, "batch setup failed: {msg}"),
            BatchError::Io(e) => write!(f, "batch i/o failed: {e}"),
        }
    }
}

impl std::error::Error for BatchError {}

impl From<std::io::Error> for BatchError {
    fn from(e: std::io::Error) -> BatchError {
        BatchError::Io(e)
    }
}

fn make_backend(settings: &BatchSettings) -> Result<Box<dyn Backend>, BatchError> {
    match settings.backend {
        BackendKind::Scripted => {
            let backend = match &settings.policy {
                Some(path) => ScriptedBackend::from_file(path),
                None => ScriptedBackend::from_json(bundled_policy(settings.scenario)),
            }
            .map_err(|e| BatchError::Setup(e.to_string()))?;
            Ok(Box::new(backend))
        }
        BackendKind::Replay => match &settings.replay {
            Some(path) => Ok(Box::new(
                ReplayBackend::from_file(path)
                    .map_err(|e| BatchError::Setup(e.to_string()))?,
            )),
            None => match bundled_replay(settings.scenario) {
                Some(text) => Ok(Box::new(ReplayBackend::from_transcript(text))),
                None => Err(BatchError::Setup(format!(
                    "no bundled replay transcript for scenario {}; pass --replay PATH",
                    settings.scenario
                ))),
            },
        },
        BackendKind::Live => {
            let backend = LiveBackend::from_env(
                None,
                settings.model.clone(),
                settings.temperature,
            )
            .map_err(|e| BatchError::Setup(e.to_string()))?;
            Ok(Box::new(backend))
        }
    }
}

/// Sidecar metadata written next to each transcript.
#[derive(Serialize)]
struct UsageFile<'a> {
    prompt_tokens: u64,
    completion_tokens: u64,
    total_tokens: u64,
    steps: u64,
    outcome: String,
    success: bool,
    observations: &'a str,
}

fn outcome_label(outcome: &RunOutcome) -> String {
    match outcome {
        RunOutcome::FinalAnswer(_) => "final_answer".to_string(),
        RunOutcome::Deadlock => "deadlock".to_string(),
        RunOutcome::StepLimit => "step_limit".to_string(),
        RunOutcome::TransportError(e) => format!("transport_error: {e}"),
        RunOutcome::BackendError(e) => format!("backend_error: {e}"),
    }
}

/// Drive one fully isolated run: fresh world, fresh backend, fresh link.
pub fn run_one(
    settings: &BatchSettings,
    run_index: u64,
) -> Result<CompletedRun, BatchError> {
    let seed = derive_run_seed(settings.seed, run_index);
    let session = Session::new(settings.scenario.session_config(
        seed,
        settings.latency,
        settings.noise,
    ));
    let mut backend = make_backend(settings)?;
    let runtime = RuntimeConfig {
        max_steps: settings.max_steps as usize,
        ..RuntimeConfig::default()
    };

    let (record, session) = if settings.loopback {
        let mut link = LoopbackLink::new(session);
        let record = run_mission(backend.as_mut(), &mut link, &runtime);
        (record, link.into_session())
    } else {
        let server = ConsoleServer::spawn(session, settings.addr.as_str())
            .map_err(BatchError::Io)?;
        let mut client = SocketClient::open(server.addr())
            .map_err(|e| BatchError::Setup(e.to_string()))?;
        let record = run_mission(backend.as_mut(), &mut client, &runtime);
        (record, server.shutdown())
    };

    let verdict: Evaluation = evaluate(settings.scenario, &session, &record);

    let run_dir = settings.out_dir.join(format!("run_{run_index}"));
    fs::create_dir_all(&run_dir)?;
    let transcript_path = run_dir.join("transcript.txt");
    fs::write(&transcript_path, render_transcript(&record))?;
    let usage = UsageFile {
        prompt_tokens: record.usage.prompt_tokens,
        completion_tokens: record.usage.completion_tokens,
        total_tokens: record.usage.total(),
        steps: record.steps as u64,
        outcome: outcome_label(&record.outcome),
        success: verdict.success,
        observations: &verdict.reason,
    };
    fs::write(
        run_dir.join("usage.json"),
        serde_json::to_string_pretty(&usage).expect("usage serializes") + "\n",
    )?;

    let result = RunResult {
        scenario: settings.scenario.as_str().to_string(),
        run_index,
        seed,
        success: verdict.success,
        prompt_tokens: record.usage.prompt_tokens,
        completion_tokens: record.usage.completion_tokens,
        total_tokens: record.usage.total(),
        steps: record.steps as u64,
        observations: verdict.reason.clone(),
        failure_reason: (!verdict.success).then(|| verdict.reason.clone()),
        justification: verdict.justification,
        transcript_path: transcript_path.display().to_string(),
    };
    Ok(CompletedRun { result, record })
}

/// Outcome of a whole batch: rows plus a partial flag when a backend
/// failure aborted the remaining runs.
pub struct BatchOutcome {
    pub rows: Vec<RunResult>,
    pub partial: bool,
}

/// Run `settings.runs` isolated worlds. A backend error (for example a live
/// API giving out) records that run's row, aborts the remainder, and flags
/// the batch as partial; evaluator failures are ordinary rows.
pub fn run_batch(settings: &BatchSettings) -> Result<BatchOutcome, BatchError> {
    fs::create_dir_all(&settings.out_dir)?;
    let mut rows = Vec::new();
    let mut partial = false;
    for run_index in 0..settings.runs {
        let completed = run_one(settings, run_index)?;
        let aborted = matches!(completed.record.outcome, RunOutcome::BackendError(_));
        rows.push(completed.result);
        if aborted {
            partial = true;
            break;
        }
    }
    Ok(BatchOutcome { rows, partial })
}

/// Convenience for tests: a settings value writing under `root`.
pub fn settings_under(
    scenario: ScenarioId,
    root: &Path,
) -> BatchSettings {
    BatchSettings {
        out_dir: root.to_path_buf(),
        ..BatchSettings::new(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv1a64_matches_published_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        let first = derive_run_seed(7, 0);
        assert_eq!(first, derive_run_seed(7, 0));
        let mut seen = std::collections::HashSet::new();
        for index in 0..100 {
            assert!(seen.insert(derive_run_seed(7, index)));
        }
        assert_ne!(derive_run_seed(7, 3), derive_run_seed(8, 3));
    }

    #[test]
    fn bundled_policies_parse() {
        for scenario in ScenarioId::ALL {
            ScriptedBackend::from_json(bundled_policy(scenario))
                .unwrap_or_else(|e| panic!("policy {scenario}: {e}"));
        }
        ScriptedBackend::from_json(include_str!(
            "../fixtures/scenario_c_burn.json"
        ))
        .expect("burn policy parses");
    }

    #[test]
    fn bundled_replay_covers_scenario_a_only() {
        let replay = ReplayBackend::from_transcript(
            bundled_replay(ScenarioId::A).expect("bundled transcript"),
        );
        assert_eq!(replay.turn_count(), 17);
        assert!(bundled_replay(ScenarioId::B).is_none());
        assert!(bundled_replay(ScenarioId::C).is_none());
    }

    #[test]
    fn backend_names_round_trip() {
        for kind in [BackendKind::Live, BackendKind::Scripted, BackendKind::Replay] {
            assert_eq!(kind.as_str().parse::<BackendKind>().unwrap(), kind);
        }
        assert!("localllm".parse::<BackendKind>().is_err());
    }
}
