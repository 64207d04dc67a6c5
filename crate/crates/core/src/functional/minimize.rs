use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use super::interaction::LocalEnergy;
use super::profile::{DensityProfile, EnergyBreakdown};
use super::trap::TrapSpec;
use crate::error::{Error, Result};
use crate::numerics::descent::{descend, SphereProblem};
use crate::numerics::tridiag::SymTridiag;

/// Starting amplitude for the minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGuess {
    /// Gaussian density with width one sixth of the domain half-width.
    Gaussian,
    /// Constant density on the open domain.
    Uniform,
    /// Density samples on the solver grid.
    Density(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Bound on `‖Hψ − μψ‖ / (|μ|‖ψ‖)`.
    pub tol: f64,
    pub max_iter: usize,
    pub init: InitialGuess,
    /// Allowed edge density relative to the maximum; ignored for hard walls.
    pub edge_tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 100_000,
            init: InitialGuess::Gaussian,
            edge_tol: 1e-8,
        }
    }
}

impl MinimizeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Minimizer {
    pub profile: DensityProfile,
    pub energy: EnergyBreakdown,
    /// Chemical potential (Lagrange multiplier of the mass constraint).
    pub mu: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Total energy after every accepted step, starting with the initial guess.
    pub energy_trace: Vec<f64>,
}

struct Problem<'a> {
    h: f64,
    potential: Vec<f64>,
    local: &'a dyn LocalEnergy,
}

impl Problem<'_> {
    /// Energy of the full amplitude, endpoints included.
    fn breakdown(&self, psi: &[f64]) -> EnergyBreakdown {
        let h = self.h;
        let kinetic = psi.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum::<f64>() / h;
        let mut potential = 0.0;
        let mut interaction = 0.0;
        for (p, v) in psi.iter().zip(&self.potential) {
            let rho = p * p;
            if rho > 0.0 {
                potential += v * rho;
                interaction += self.local.eval(rho).0;
            }
        }
        EnergyBreakdown::new(kinetic, h * potential, h * interaction)
    }
}

/// Unknowns are the interior amplitudes; the endpoints are pinned to zero.
impl SphereProblem for Problem<'_> {
    fn weight(&self) -> f64 {
        self.h
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let h = self.h;
        let n = x.len();
        let mut kinetic = x[0] * x[0] + x[n - 1] * x[n - 1];
        kinetic += x.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum::<f64>();
        let mut rest = 0.0;
        for (p, v) in x.iter().zip(&self.potential[1..]) {
            let rho = p * p;
            if rho > 0.0 {
                rest += v * rho + self.local.eval(rho).0;
            }
        }
        kinetic / h + h * rest
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let ih2 = 1.0 / (self.h * self.h);
        (0..n)
            .map(|i| {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                let f1 = self.local.eval(x[i] * x[i]).1;
                (2.0 * x[i] - left - right) * ih2 + (self.potential[i + 1] + f1) * x[i]
            })
            .collect()
    }

    fn precondition(&self, x: &[f64], mu: f64, sigma: f64, r: &[f64]) -> Option<Vec<f64>> {
        let n = x.len();
        let ih2 = 1.0 / (self.h * self.h);
        let diag = (0..n)
            .map(|i| {
                let rho = x[i] * x[i];
                let (_, f1, f2) = self.local.eval(rho);
                2.0 * ih2 + self.potential[i + 1] + f1 + 2.0 * rho * f2 + sigma
            })
            .collect();
        SymTridiag::new(diag, vec![-ih2; n - 1]).solve_spd_shifted(mu, r)
    }
}

fn potential_on(grid: &Grid1D, trap: &TrapSpec) -> Vec<f64> {
    grid.points()
        .iter()
        .map(|&z| {
            let v = trap.potential(z);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        })
        .collect()
}

/// Minimizes `∫|∂√ρ|² + Vρ + F(ρ)` over `ρ ≥ 0` with `∫ρ = mass`.
///
/// The amplitude `ψ = √ρ` is held at zero on both grid endpoints. Each step
/// solves a shifted tridiagonal linearization for a descent direction
/// tangent to the mass sphere, renormalizes, and backtracks on the energy,
/// so accepted energies never increase.
pub fn minimize_functional(
    mass: f64,
    trap: &TrapSpec,
    local: &dyn LocalEnergy,
    grid: Grid1D,
    opts: &MinimizeOptions,
) -> Result<Minimizer> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    super::longitudinal::check_grid(trap, &grid)?;
    let n = grid.n_points;
    let problem = Problem {
        h: grid.spacing(),
        potential: potential_on(&grid, trap),
        local,
    };
    let psi0 = initial_amplitude(&grid, &opts.init)?;
    let out = descend(
        &problem,
        psi0[1..n - 1].to_vec(),
        mass,
        opts.tol,
        opts.max_iter,
        "density functional minimizer",
    )?;

    let mut values = vec![0.0; n];
    for (v, x) in values[1..n - 1].iter_mut().zip(&out.x) {
        *v = x * x;
    }
    let mut psi = vec![0.0; n];
    psi[1..n - 1].copy_from_slice(&out.x);
    let energy = problem.breakdown(&psi);
    let profile = DensityProfile::new(grid, values, mass)?;
    if !trap.is_hard_wall() {
        let max = profile.max();
        let edge = profile.values[1].max(profile.values[n - 2]);
        if edge > opts.edge_tol * max {
            return Err(Error::DomainTooSmall { leaked: edge / max });
        }
    }
    Ok(Minimizer {
        profile,
        energy,
        mu: out.mu,
        iterations: out.iterations,
        residual: out.residual,
        energy_trace: out.trace,
    })
}

fn initial_amplitude(grid: &Grid1D, init: &InitialGuess) -> Result<Vec<f64>> {
    let n = grid.n_points;
    Ok(match init {
        InitialGuess::Gaussian => {
            let c = 0.5 * (grid.z_min + grid.z_max);
            let w = (grid.z_max - grid.z_min) / 12.0;
            grid.points()
                .iter()
                .map(|z| (-0.5 * ((z - c) / w).powi(2)).exp())
                .collect()
        }
        InitialGuess::Uniform => vec![1.0; n],
        InitialGuess::Density(v) => {
            if v.len() != n {
                return Err(Error::InvalidInput(format!(
                    "initial density has {} samples, grid has {n}",
                    v.len()
                )));
            }
            v.iter().map(|x| x.max(0.0).sqrt()).collect()
        }
    })
}

/// Energy of a given density under the discretized functional, with the
/// density's own mass.
pub fn functional_energy(profile: &DensityProfile, trap: &TrapSpec, local: &dyn LocalEnergy) -> EnergyBreakdown {
    let problem = Problem {
        h: profile.grid.spacing(),
        potential: potential_on(&profile.grid, trap),
        local,
    };
    let psi: Vec<f64> = profile.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    problem.breakdown(&psi)
}

/// Pointwise Euler–Lagrange residual `−ψ″/ψ + V + F′(ρ) − μ` relative to
/// `|μ|`, maximized over nodes with `ρ > cutoff·max ρ`.
pub fn euler_lagrange_residual(
    profile: &DensityProfile,
    trap: &TrapSpec,
    local: &dyn LocalEnergy,
    mu: f64,
    cutoff: f64,
) -> f64 {
    let h = profile.grid.spacing();
    let psi: Vec<f64> = profile.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let floor = cutoff * profile.max();
    let mut worst: f64 = 0.0;
    for i in 1..psi.len() - 1 {
        if profile.values[i] <= floor {
            continue;
        }
        let z = profile.grid.point(i);
        let lap = (2.0 * psi[i] - psi[i - 1] - psi[i + 1]) / (h * h * psi[i]);
        let v = trap.potential(z);
        let v = if v.is_finite() { v } else { 0.0 };
        let local_mu = lap + v + local.eval(profile.values[i]).1;
        worst = worst.max((local_mu - mu).abs() / mu.abs());
    }
    worst
}
