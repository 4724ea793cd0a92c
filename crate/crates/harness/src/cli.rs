//! Command-line interface and config-file resolution for the batch runner.
//!
//! Every flag may take its default from a JSON config file (`--config`);
//! an explicit flag always wins. Credentials are deliberately absent from
//! both: the live backend reads its API key from the environment only.

use std::path::PathBuf;

use clap::Parser;
use serde::Deserialize;

use crate::batch::{BackendKind, BatchSettings};
use crate::scenario::ScenarioId;

#[derive(Parser, Debug, Default)]
#[command(
    name = "llmsat",
    about = "Run agent-piloted spacecraft mission scenarios and emit batch reports",
    after_help = "Credentials: the live backend reads OPENAI_API_KEY from the \
                  environment; there is no flag or config key for secrets."
)]
pub struct Cli {
    /// Mission scenario: A, B, or C.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Number of runs in the batch.
    #[arg(long)]
    pub runs: Option<u64>,
    /// Completion backend: live, scripted, or replay.
    #[arg(long)]
    pub backend: Option<String>,
    /// Model identifier for the live backend.
    #[arg(long)]
    pub model: Option<String>,
    /// Sampling temperature for the live backend.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Batch seed; per-run seeds are derived from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulated seconds consumed by each command round trip.
    #[arg(long)]
    pub latency: Option<f64>,
    /// Standard deviation of the relative burn execution error.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Output directory for reports and per-run artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Drive the console in-process instead of over a localhost socket.
    #[arg(long)]
    pub loopback: bool,
    /// Console server bind address (ignored with --loopback).
    #[arg(long)]
    pub addr: Option<String>,
    /// Scripted-policy JSON file (defaults to the bundled policy).
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Replay transcript file (scenario A has a bundled default).
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Maximum model calls per run.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// JSON file supplying defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// JSON config file: each key mirrors the flag of the same name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub runs: Option<u64>,
    pub backend: Option<String>,
    pub model: Option<String>,
    pub temperature: Option<f64>,
    pub seed: Option<u64>,
    pub latency: Option<f64>,
    pub noise: Option<f64>,
    pub out: Option<PathBuf>,
    pub loopback: Option<bool>,
    pub addr: Option<String>,
    pub policy: Option<PathBuf>,
    pub replay: Option<PathBuf>,
    pub max_steps: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<ConfigFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Merge precedence: explicit flag > config file key > built-in default.
pub fn resolve_settings(cli: &Cli, config: &ConfigFile) -> Result<BatchSettings, String> {
    let scenario_text = cli
        .scenario
        .clone()
        .or_else(|| config.scenario.clone())
        .ok_or("--scenario is required (A, B, or C)")?;
    let scenario: ScenarioId = scenario_text.parse()?;
    let mut settings = BatchSettings::new(scenario);

    if let Some(runs) = cli.runs.or(config.runs) {
        if runs == 0 {
            return Err("--runs must be at least 1".to_string());
        }
        settings.runs = runs;
    }
    if let Some(kind) = cli.backend.as_ref().or(config.backend.as_ref()) {
        settings.backend = kind.parse::<BackendKind>()?;
    }
    if let Some(model) = cli.model.clone().or_else(|| config.model.clone()) {
        settings.model = model;
    }
    if let Some(temperature) = cli.temperature.or(config.temperature) {
        settings.temperature = temperature;
    }
    if let Some(seed) = cli.seed.or(config.seed) {
        settings.seed = seed;
    }
    if let Some(latency) = cli.latency.or(config.latency) {
        settings.latency = latency;
    }
    if let Some(noise) = cli.noise.or(config.noise) {
        settings.noise = noise;
    }
    if let Some(out) = cli.out.clone().or_else(|| config.out.clone()) {
        settings.out_dir = out;
    }
    settings.loopback = cli.loopback || config.loopback.unwrap_or(false);
    if let Some(addr) = cli.addr.clone().or_else(|| config.addr.clone()) {
        settings.addr = addr;
    }
    if let Some(policy) = cli.policy.clone().or_else(|| config.policy.clone()) {
        settings.policy = Some(policy);
    }
    if let Some(replay) = cli.replay.clone().or_else(|| config.replay.clone()) {
        settings.replay = Some(replay);
    }
    if let Some(max_steps) = cli.max_steps.or(config.max_steps) {
        if max_steps == 0 {
            return Err("--max-steps must be at least 1".to_string());
        }
        settings.max_steps = max_steps;
    }
    Ok(settings)
}
