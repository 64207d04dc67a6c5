//! The 1D energy functional `∫ |∂√ρ|² + V_L ρ + ρ³e(g/ρ)` under a mass
//! constraint, its minimizers, and diagnostics on the resulting profile.

mod grid;
mod interaction;
mod local;
mod longitudinal;
mod minimize;
mod profile;
mod trap;
mod validity;

pub use grid::{Grid1D, MIN_POINTS};
pub use interaction::{LiebLiniger, LocalEnergy, MeanField, NoInteraction, Tonks};
pub use local::{minimize_local, LocalMinimizer};
pub use longitudinal::{longitudinal_ground_state, LongitudinalState, REFINEMENT_TOL};
pub use minimize::{
    euler_lagrange_residual, functional_energy, minimize_functional, InitialGuess, MinimizeOptions, Minimizer,
};
pub use profile::{mean_density, DensityProfile, EnergyBreakdown};
pub use trap::{TrapExponent, TrapSpec};
pub use validity::{validity_check, validity_from_mean_density, ValidityRecord, ValidityThresholds};

pub(crate) use longitudinal::check_grid as check_trap_grid;

use crate::error::Result;
use crate::ll_core::LLEnergyTable;
use crate::regimes::{support_half_width, SupportModel};

/// Default number of grid points for automatically sized domains.
pub const DEFAULT_POINTS: usize = 2049;

/// Multiple of the support estimate covered by an automatic domain.
pub const DOMAIN_FACTOR: f64 = 3.0;

/// Symmetric grid of `DOMAIN_FACTOR` times the estimated support half-width;
/// for a hard wall, exactly the box.
pub fn auto_grid(n: f64, trap: &TrapSpec, g: f64, model: SupportModel, n_points: usize) -> Result<Grid1D> {
    trap.validate()?;
    if trap.is_hard_wall() {
        return Grid1D::symmetric(trap.length, n_points);
    }
    Grid1D::symmetric(DOMAIN_FACTOR * support_half_width(n, trap, g, model)?, n_points)
}

/// Minimizer of the full functional with the Lieb–Liniger energy density.
/// Without a grid, the domain is sized from the support estimates.
pub fn minimize_general(
    n: f64,
    trap: &TrapSpec,
    g: f64,
    table: &LLEnergyTable,
    grid: Option<Grid1D>,
    opts: &MinimizeOptions,
) -> Result<Minimizer> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(crate::Error::InvalidInput(format!(
            "coupling must be nonnegative, got {g}"
        )));
    }
    let grid = match grid {
        Some(g) => g,
        None => auto_grid(n, trap, g, SupportModel::LiebLiniger, DEFAULT_POINTS)?,
    };
    minimize_functional(n, trap, &LiebLiniger { g, table }, grid, opts)
}
