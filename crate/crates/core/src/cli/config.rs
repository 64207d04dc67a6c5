use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::TrapExponent;
use crate::regimes::{GasParams, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Classify,
    Sweep,
    Oracle,
    Gp3d,
    EOfGamma,
}

/// Optional numerical overrides; absent fields keep the solver defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    /// Half-width of the longitudinal domain for `solve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_half_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// `NgL` values at fixed `N`, `L = 1`, scaled by the Thomas–Fermi energy.
    ThomasFermi,
    /// `N` values at fixed `g/γ`, `L = 1`, scaled by `Nγ²`.
    LiebLiniger,
    /// `r` values at fixed `g`, `N = L = 1`: 3D against 1D mean field.
    Crossover,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub values: Vec<f64>,
    #[serde(default = "TrapExponent::harmonic")]
    pub s: TrapExponent,
    #[serde(default = "default_sweep_particles")]
    pub particles: f64,
    #[serde(default = "one")]
    pub g_over_gamma: f64,
    #[serde(default = "one")]
    pub coupling: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            kind: SweepKind::ThomasFermi,
            values: vec![1e2, 1e3, 1e4],
            s: TrapExponent::harmonic(),
            particles: default_sweep_particles(),
            g_over_gamma: 1.0,
            coupling: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSpec {
    pub particles: Vec<usize>,
    pub couplings: Vec<f64>,
    pub ell: f64,
    /// Coarse mesh; the extrapolation partner has twice as many cells.
    pub cells: usize,
    pub bethe_particles: Vec<usize>,
    pub bethe_couplings: Vec<f64>,
    pub smearing_mesh: f64,
    pub superadditive_trials: usize,
    pub temple_trials: usize,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            particles: vec![2, 3],
            couplings: vec![0.1, 1.0, 10.0, 1e4],
            ell: 1.0,
            cells: 32,
            bethe_particles: vec![8, 16, 32, 64],
            bethe_couplings: vec![0.1, 1.0, 10.0],
            smearing_mesh: 1e-3,
            superadditive_trials: 100,
            temple_trials: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Gp3dSpec {
    pub particles: f64,
    pub length: f64,
    pub s: TrapExponent,
    pub r: f64,
    /// Scattering length; derived from `coupling` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub coupling: f64,
    pub z_half_width: f64,
    pub z_points: usize,
    pub tol: f64,
}

impl Default for Gp3dSpec {
    fn default() -> Self {
        Self {
            particles: 1.0,
            length: 1.0,
            s: TrapExponent::harmonic(),
            r: 0.1,
            a: None,
            coupling: 1.0,
            z_half_width: 6.0,
            z_points: 513,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EOfGammaSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for EOfGammaSpec {
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 1e3,
            points: 121,
        }
    }
}

/// Everything one invocation needs. Round-trips through JSON unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GasParams>,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gp3d: Option<Gp3dSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_of_gamma: Option<EOfGammaSpec>,
    #[serde(default)]
    pub solver: SolverOverrides,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Worker threads for sweeps and oracle batches; all cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Also write a gnuplot script next to each CSV table.
    #[serde(default)]
    pub gnuplot: bool,
}

fn default_sweep_particles() -> f64 {
    1e7
}

fn one() -> f64 {
    1.0
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: None,
            thresholds: Thresholds::default(),
            sweep: None,
            oracle: None,
            gp3d: None,
            e_of_gamma: None,
            solver: SolverOverrides::default(),
            out_dir: default_out_dir(),
            threads: None,
            seed: 0,
            gnuplot: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        self.sweep.clone().unwrap_or_default()
    }

    pub fn oracle_spec(&self) -> OracleSpec {
        self.oracle.clone().unwrap_or_default()
    }

    pub fn gp3d_spec(&self) -> Gp3dSpec {
        self.gp3d.clone().unwrap_or_default()
    }

    pub fn e_of_gamma_spec(&self) -> EOfGammaSpec {
        self.e_of_gamma.clone().unwrap_or_default()
    }

    /// Checks everything that can be checked before solving, including that
    /// the output directory can be created and written.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        match self.command {
            Command::Solve | Command::Classify => match &self.params {
                Some(p) => p.validate()?,
                None => return bad(format!("{:?} needs a `params` section", self.command)),
            },
            Command::Sweep => {
                let s = self.sweep_spec();
                s.s.validate()?;
                if s.values.is_empty() {
                    return bad("sweep range is empty".into());
                }
                if s.values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return bad("sweep values must be positive".into());
                }
                if !(s.particles >= 1.0 && s.g_over_gamma > 0.0 && s.coupling > 0.0) {
                    return bad("sweep needs particles ≥ 1 and positive couplings".into());
                }
            }
            Command::Oracle => {
                let o = self.oracle_spec();
                if o.particles.iter().any(|n| !(2..=3).contains(n)) {
                    return bad("grid oracle supports 2 or 3 particles".into());
                }
                if o.bethe_particles
                    .iter()
                    .any(|&n| n == 0 || n > crate::oracles::MAX_PARTICLES)
                {
                    return bad(format!(
                        "Bethe particle counts must lie in 1..={}",
                        crate::oracles::MAX_PARTICLES
                    ));
                }
                if o.couplings
                    .iter()
                    .chain(&o.bethe_couplings)
                    .any(|g| !(*g >= 0.0 && g.is_finite()))
                {
                    return bad("couplings must be nonnegative".into());
                }
                if !(o.ell > 0.0 && o.smearing_mesh > 0.0 && o.cells >= 8) {
                    return bad("oracle needs ell > 0, smearing_mesh > 0, cells ≥ 8".into());
                }
            }
            Command::Gp3d => {
                let g = self.gp3d_spec();
                g.s.validate()?;
                if !(g.particles > 0.0 && g.length > 0.0 && g.r > 0.0 && g.coupling >= 0.0 && g.tol > 0.0) {
                    return bad("gp3d needs positive particles, length, r, tol and coupling ≥ 0".into());
                }
                if g.a.is_some_and(|a| !(a >= 0.0)) {
                    return bad("scattering length must be nonnegative".into());
                }
            }
            Command::EOfGamma => {
                let e = self.e_of_gamma_spec();
                if !(e.t_min > 0.0 && e.t_max > e.t_min && e.points >= 2) {
                    return bad("e-of-gamma needs 0 < t_min < t_max and at least 2 points".into());
                }
            }
        }
        if let Some(tol) = self.solver.tol {
            if !(tol > 0.0) {
                return bad(format!("tolerance must be positive, got {tol}"));
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        fs::create_dir_all(&self.out_dir)
            .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", self.out_dir.display())))?;
        let probe = self.out_dir.join(".write-probe");
        fs::write(&probe, b"")
            .and_then(|_| fs::remove_file(&probe))
            .map_err(|e| Error::InvalidInput(format!("{} is not writable: {e}", self.out_dir.display())))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse3d::TransverseKind;

    #[test]
    fn round_trips_losslessly() {
        let mut c = RunConfig::new(Command::Sweep);
        c.params = Some(GasParams::new(
            1e5,
            1.0,
            1e-3,
            0.1 / 3.0,
            TrapExponent::Power(2.5),
            TransverseKind::HardWallDisk,
        ));
        c.sweep = Some(SweepSpec {
            values: vec![0.1 + 0.2, 1e-300, 7.0 / 3.0],
            ..SweepSpec::default()
        });
        c.solver.tol = Some(1e-9);
        c.threads = Some(3);
        c.seed = u64::MAX;
        let back = RunConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = RunConfig::from_json(r#"{"command": "e-of-gamma"}"#).unwrap();
        assert_eq!(c.command, Command::EOfGamma);
        assert_eq!(c.e_of_gamma_spec().points, 121);
        assert!(RunConfig::from_json(r#"{"command": "solve", "bogus": 1}"#).is_err());
    }

    #[test]
    fn solve_needs_params() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = RunConfig::new(Command::Solve);
        c.out_dir = dir.path().to_path_buf();
        assert!(matches!(c.validate(), Err(Error::InvalidInput(_))));
    }
}
