//! Batch report assembly and emission: CSV, JSON, and a markdown table
//! mirroring the Run / Result / Tokens / Observations results schema.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::batch::{BatchOutcome, BatchSettings, RunResult};

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub scenario: String,
    pub backend: String,
    pub model: String,
    pub temperature: f64,
    pub batch_seed: u64,
    /// Runs requested on the command line.
    pub requested_runs: u64,
    /// Runs actually executed (smaller than requested when partial).
    pub runs: u64,
    pub successes: u64,
    /// successes / runs, exact f64 division over the rows below.
    pub success_rate: f64,
    /// mean of the rows' total_tokens, exact f64 division.
    pub average_tokens: f64,
    /// True when a backend failure aborted the remaining runs.
    pub partial: bool,
    pub rows: Vec<RunResult>,
}

impl BatchReport {
    pub fn assemble(settings: &BatchSettings, outcome: BatchOutcome) -> BatchReport {
        let runs = outcome.rows.len() as u64;
        let successes =
            outcome.rows.iter().filter(|r| r.success).count() as u64;
        let token_sum: u64 = outcome.rows.iter().map(|r| r.total_tokens).sum();
        let (success_rate, average_tokens) = if runs == 0 {
            (0.0, 0.0)
        } else {
            (successes as f64 / runs as f64, token_sum as f64 / runs as f64)
        };
        BatchReport {
            scenario: settings.scenario.as_str().to_string(),
            backend: settings.backend.as_str().to_string(),
            model: settings.model.clone(),
            temperature: settings.temperature,
            batch_seed: settings.seed,
            requested_runs: settings.runs,
            runs,
            successes,
            success_rate,
            average_tokens,
            partial: outcome.partial,
            rows: outcome.rows,
        }
    }

    /// CSV with one row per run; aggregates live in the JSON report.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "Run",
                "Result",
                "Tokens",
                "Observations",
                "Scenario",
                "Seed",
                "PromptTokens",
                "CompletionTokens",
                "Steps",
                "Transcript",
            ])
            .expect("csv header");
        for row in &self.rows {
            writer
                .write_record([
                    (row.run_index + 1).to_string(),
                    mark(row.success).to_string(),
                    row.total_tokens.to_string(),
                    row.observations.clone(),
                    row.scenario.clone(),
                    row.seed.to_string(),
                    row.prompt_tokens.to_string(),
                    row.completion_tokens.to_string(),
                    row.steps.to_string(),
                    row.transcript_path.clone(),
                ])
                .expect("csv row");
        }
        let bytes = writer.into_inner().expect("csv buffer");
        String::from_utf8(bytes).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# Scenario {} report\n\n", self.scenario));
        out.push_str(&format!(
            "Backend: {} (model {}, temperature {}), batch seed {}.\n\n",
            self.backend, self.model, self.temperature, self.batch_seed
        ));
        if self.partial {
            out.push_str(&format!(
                "**Partial batch:** a backend failure aborted the remaining \
                 runs; {} of {} requested runs completed.\n\n",
                self.runs, self.requested_runs
            ));
        }
        out.push_str("| Run | Result | Tokens | Observations |\n");
        out.push_str("|-----|--------|--------|--------------|\n");
        for row in &self.rows {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                row.run_index + 1,
                mark(row.success),
                thousands(row.total_tokens),
                row.observations.replace('|', "\\|"),
            ));
        }
        out.push_str(&format!(
            "| Avg. | {} | {} |  |\n",
            percent(self.success_rate),
            thousands(self.average_tokens.round() as u64),
        ));
        let justified: Vec<_> = self
            .rows
            .iter()
            .filter_map(|r| r.justification.as_ref().map(|j| (r.run_index, j)))
            .collect();
        if !justified.is_empty() {
            out.push_str(
                "\n## Justifications for review\n\nThe evaluator checks only \
                 that a non-empty message was sent; whether the justification \
                 is appropriate is left to the reader.\n",
            );
            for (index, text) in justified {
                out.push_str(&format!("\n### Run {}\n\n", index + 1));
                for line in text.lines() {
                    out.push_str(&format!("> {line}\n"));
                }
            }
        }
        out
    }

    /// Write report.csv, report.json, and report.md under `dir`.
    pub fn write_all(&self, dir: &Path) -> std::io::Result<[PathBuf; 3]> {
        fs::create_dir_all(dir)?;
        let paths = [
            dir.join("report.csv"),
            dir.join("report.json"),
            dir.join("report.md"),
        ];
        let contents = [self.to_csv(), self.to_json(), self.to_markdown()];
        for (path, content) in paths.iter().zip(contents.iter()) {
            let mut file = fs::File::create(path)?;
            file.write_all(content.as_bytes())?;
        }
        Ok(paths)
    }
}

/// The results tables' pass/fail marks.
fn mark(success: bool) -> &'static str {
    if success {
        "\u{2713}"
    } else {
        "\u{2717}"
    }
}

/// 54087 → "54,087".
fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// 0.8 → "80%"; 0.4 → "40%"; 1/3 → "33.33%".
fn percent(rate: f64) -> String {
    let mut text = format!("{:.2}", rate * 100.0);
    while text.ends_with('0') {
        text.pop();
    }
    if text.ends_with('.') {
        text.pop();
    }
    format!("{text}%")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batch::BatchSettings;
    use crate::scenario::ScenarioId;

    fn row(index: u64, success: bool, tokens: u64) -> RunResult {
        RunResult {
            scenario: "A".to_string(),
            run_index: index,
            seed: index * 11,
            success,
            prompt_tokens: tokens - 100,
            completion_tokens: 100,
            total_tokens: tokens,
            steps: 9,
            observations: format!("row {index}"),
            failure_reason: (!success).then(|| format!("row {index}")),
            justification: None,
            transcript_path: format!("runs/run_{index}/transcript.txt"),
        }
    }

    fn sample(successes: &[bool], tokens: &[u64]) -> BatchReport {
        let rows = successes
            .iter()
            .zip(tokens)
            .enumerate()
            .map(|(i, (&s, &t))| row(i as u64, s, t))
            .collect();
        let mut settings = BatchSettings::new(ScenarioId::A);
        settings.runs = successes.len() as u64;
        BatchReport::assemble(
            &settings,
            BatchOutcome { rows, partial: false },
        )
    }

    #[test]
    fn aggregates_are_exact_row_arithmetic() {
        let report = sample(
            &[true, true, false, true, false],
            &[55_447, 56_701, 66_663, 60_822, 30_801],
        );
        assert_eq!(report.successes, 3);
        assert_eq!(report.success_rate, 3.0 / 5.0);
        let total: u64 = report.rows.iter().map(|r| r.total_tokens).sum();
        assert_eq!(report.average_tokens, total as f64 / 5.0);
    }

    #[test]
    fn markdown_table_uses_the_results_schema() {
        let report = sample(&[true, false], &[12_000, 8_000]);
        let md = report.to_markdown();
        assert!(md.contains("| Run | Result | Tokens | Observations |"));
        assert!(md.contains("| 1 | \u{2713} | 12,000 | row 0 |"));
        assert!(md.contains("| 2 | \u{2717} | 8,000 | row 1 |"));
        assert!(md.contains("| Avg. | 50% | 10,000 |  |"));
    }

    #[test]
    fn csv_keeps_header_and_row_order() {
        let report = sample(&[true], &[1_234]);
        let csv_text = report.to_csv();
        let mut lines = csv_text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "Run,Result,Tokens,Observations,Scenario,Seed,PromptTokens,\
             CompletionTokens,Steps,Transcript"
        );
        assert!(lines.next().unwrap().starts_with("1,\u{2713},1234,row 0,A,"));
    }

    #[test]
    fn percent_formatting_reports_exact_arithmetic() {
        assert_eq!(percent(0.8), "80%");
        assert_eq!(percent(0.4), "40%");
        assert_eq!(percent(1.0 / 3.0), "33.33%");
        assert_eq!(thousands(54_087), "54,087");
        assert_eq!(thousands(801), "801");
        assert_eq!(thousands(1_000_000), "1,000,000");
    }

    #[test]
    fn partial_batches_are_flagged_in_markdown() {
        let mut settings = BatchSettings::new(ScenarioId::C);
        settings.runs = 5;
        let report = BatchReport::assemble(
            &settings,
            BatchOutcome { rows: vec![row(0, false, 500)], partial: true },
        );
        assert!(report.partial);
        let md = report.to_markdown();
        assert!(md.contains("**Partial batch:**"));
        assert!(md.contains("1 of 5 requested runs completed"));
    }

    #[test]
    fn justifications_are_quoted_for_review() {
        let mut base = row(0, true, 900);
        base.justification =
            Some("Mission cannot be met: safety floor.\nSecond line.".to_string());
        let mut settings = BatchSettings::new(ScenarioId::C);
        settings.runs = 1;
        let report = BatchReport::assemble(
            &settings,
            BatchOutcome { rows: vec![base], partial: false },
        );
        let md = report.to_markdown();
        assert!(md.contains("## Justifications for review"));
        assert!(md.contains("> Mission cannot be met: safety floor."));
        assert!(md.contains("> Second line."));
    }
}
