use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::ReportFormat;
use crate::error::{CliError, CliResult};

/// Wall-clock time, kept apart so the rest of the report is reproducible.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// Input path to hex SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub passed: bool,
    pub results: BTreeMap<String, Value>,
    pub timing: Timing,
    #[serde(skip)]
    text_overrides: BTreeMap<String, String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            command,
            inputs: BTreeMap::new(),
            seed: None,
            passed: true,
            results: BTreeMap::new(),
            timing: Timing::default(),
            text_overrides: BTreeMap::new(),
        }
    }

    pub fn digest_input(&mut self, path: &Path) -> CliResult<()> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(())
    }

    /// Records a float; non-finite values are a numerical failure.
    pub fn num(&mut self, key: &str, value: f64) -> CliResult<()> {
        let n = serde_json::Number::from_f64(value)
            .ok_or_else(|| CliError::Numerical(format!("{key} is not finite ({value})")))?;
        self.results.insert(key.to_string(), Value::Number(n));
        Ok(())
    }

    pub fn nums(&mut self, key: &str, values: &[f64]) -> CliResult<()> {
        let mut arr = Vec::with_capacity(values.len());
        for &v in values {
            let n = serde_json::Number::from_f64(v)
                .ok_or_else(|| CliError::Numerical(format!("{key} contains a non-finite value ({v})")))?;
            arr.push(Value::Number(n));
        }
        self.results.insert(key.to_string(), Value::Array(arr));
        Ok(())
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    /// Replaces how `key` is shown in the text report only.
    pub fn display_as(&mut self, key: &str, text: String) {
        self.text_overrides.insert(key.to_string(), text);
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            ReportFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        for (path, digest) in &self.inputs {
            let _ = writeln!(out, "input {path}: sha256 {digest}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for (key, value) in &self.results {
            match self.text_overrides.get(key) {
                Some(text) => {
                    let _ = writeln!(out, "{key}: {text}");
                }
                None => {
                    let _ = writeln!(out, "{key}: {}", text_value(value));
                }
            }
        }
        let _ = writeln!(out, "status: {}", if self.passed { "pass" } else { "fail" });
        let _ = writeln!(out, "wall_clock_seconds: {:.3}", self.timing.wall_clock_seconds);
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}
