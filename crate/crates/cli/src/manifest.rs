use std::path::{Path, PathBuf};

use serde::Serialize;
use tabnoise::totto::CorpusReport;

#[derive(Debug, Default, Clone, Serialize)]
pub struct Counts {
    /// Non-blank input lines: `parsed + skipped`.
    pub read: usize,
    pub parsed: usize,
    pub skipped: usize,
    pub written: usize,
    /// Noisy records the operator could not change.
    pub applied_false: usize,
    pub duplicate_highlights: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkipEntry {
    pub line: usize,
    pub error: String,
}

/// Written next to every output so the artifact can be rebuilt from
/// (input, command, seed).
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input: PathBuf,
    pub output: PathBuf,
    pub seed: Option<u64>,
    pub parameters: serde_json::Value,
    pub counts: Counts,
    pub skipped_lines: Vec<SkipEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    pub tool_version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub records_checked: usize,
    pub violations: usize,
}

impl RunManifest {
    pub fn new(command: &str, input: &Path, output: &Path, seed: Option<u64>, parameters: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            input: input.to_path_buf(),
            output: output.to_path_buf(),
            seed,
            parameters,
            counts: Counts::default(),
            skipped_lines: Vec::new(),
            verification: None,
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn record_input(&mut self, report: &CorpusReport, parsed: usize) {
        self.counts.parsed = parsed;
        self.counts.skipped = report.skipped.len();
        self.counts.read = parsed + report.skipped.len();
        self.counts.duplicate_highlights = report.duplicate_highlights;
        self.skipped_lines = report
            .skipped
            .iter()
            .map(|s| SkipEntry {
                line: s.line,
                error: s.error.to_string(),
            })
            .collect();
    }

    pub fn write(&self) -> std::io::Result<PathBuf> {
        let path = manifest_path(&self.output);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}

/// `out/final.jsonl` -> `out/final.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    sibling(output, "manifest.json")
}

/// `out/dev.jsonl` + `n1.jsonl` -> `out/dev.n1.jsonl`.
pub fn sibling(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}.{suffix}"))
}
