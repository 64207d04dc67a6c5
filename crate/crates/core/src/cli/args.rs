use std::path::PathBuf;

use clap::Parser;

use super::config::{Command, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "bose1d",
    version,
    about = "Density functionals and oracles for elongated Bose gases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Subcommand,

    /// JSON run configuration; its `command` field may be omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps and oracle batches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write gnuplot scripts next to the CSV tables.
    #[arg(long, global = true)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Subcommand {
    /// Minimize the full functional for `params` and compare with the regime limit.
    Solve,
    /// Place `params` in Regions 1–5.
    Classify,
    /// Approach to a limit over a parameter range.
    Sweep,
    /// Few-body, Bethe-ansatz and explicit-bound checks.
    Oracle,
    /// 3D Gross–Pitaevskii ground state and its 1D comparison.
    Gp3d,
    /// Dump the homogeneous energy `e(t)` and `e'(t)`.
    EOfGamma,
}

impl From<Subcommand> for Command {
    fn from(s: Subcommand) -> Self {
        match s {
            Subcommand::Solve => Command::Solve,
            Subcommand::Classify => Command::Classify,
            Subcommand::Sweep => Command::Sweep,
            Subcommand::Oracle => Command::Oracle,
            Subcommand::Gp3d => Command::Gp3d,
            Subcommand::EOfGamma => Command::EOfGamma,
        }
    }
}

impl Cli {
    /// Merges the config file (if any) with the command line; flags win.
    pub fn into_config(self) -> Result<RunConfig> {
        let command = Command::from(self.command);
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
                let mut value: serde_json::Value = serde_json::from_str(&text)?;
                let obj = value
                    .as_object_mut()
                    .ok_or_else(|| Error::InvalidInput("config must be a JSON object".into()))?;
                let tag = serde_json::to_value(command)?;
                match obj.get("command") {
                    Some(existing) if *existing != tag => {
                        return Err(Error::InvalidInput(format!(
                            "config is for command {existing}, but {tag} was requested"
                        )))
                    }
                    _ => {
                        obj.insert("command".into(), tag);
                    }
                }
                serde_json::from_value(value)?
            }
            None => RunConfig::new(command),
        };
        if let Some(out) = self.out {
            cfg.out_dir = out;
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.gnuplot |= self.gnuplot;
        Ok(cfg)
    }
}
