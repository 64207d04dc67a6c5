use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::config::RunConfig;
use crate::error::Result;
use crate::regimes::RegimeReport;

/// File name of the deterministic report inside the output directory.
pub const REPORT_FILE: &str = "report.json";
/// Wall-clock data lives here so that reports stay byte-identical.
pub const METADATA_FILE: &str = "metadata.json";
/// JSON schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Invariant {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config_echo: RunConfig,
    pub regime_report: Option<RegimeReport>,
    pub energies: Map<String, Value>,
    /// Paths relative to the output directory.
    pub profiles_written: Vec<String>,
    pub invariants: Vec<Invariant>,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            config_echo: config.clone(),
            regime_report: None,
            energies: Map::new(),
            profiles_written: Vec::new(),
            invariants: Vec::new(),
        }
    }

    pub fn energy(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.energies.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.invariants.push(Invariant::new(name, pass, detail));
    }

    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> Vec<&Invariant> {
        self.invariants.iter().filter(|i| !i.pass).collect()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(dir.join(REPORT_FILE), text)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub started_unix_seconds: f64,
    pub elapsed_seconds: f64,
    pub version: String,
    pub threads: usize,
}

impl RunMetadata {
    pub fn now_unix() -> f64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join(METADATA_FILE), serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
