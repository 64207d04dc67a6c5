use serde::{Deserialize, Serialize};

use super::limits::{solve_unit_limit, tf_unit_mu, PointRule};
use super::params::{ll_length, tf_length};
use crate::error::{Error, Result};
use crate::functional::{
    auto_grid, longitudinal_ground_state, minimize_functional, DensityProfile, Grid1D, MeanField, MinimizeOptions,
    Minimizer, TrapExponent, TrapSpec, DEFAULT_POINTS,
};

/// Which support estimate sizes an automatic domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportModel {
    /// Mean-field interaction: the larger of the ideal and Thomas–Fermi extents.
    MeanField,
    /// Lieb–Liniger interaction: the ideal extent or, if larger, the
    /// smaller of the Thomas–Fermi and Tonks extents.
    LiebLiniger,
}

/// Estimated half-width of the cloud of `n` particles in `trap`.
pub fn support_half_width(n: f64, trap: &TrapSpec, g: f64, model: SupportModel) -> Result<f64> {
    trap.validate()?;
    let l = trap.length;
    let s = match trap.s {
        TrapExponent::HardWall => return Ok(l),
        TrapExponent::Power(s) => s,
    };
    let ideal = l * 4f64.powf(1.0 / s);
    if !(g > 0.0) {
        return Ok(ideal);
    }
    let tf = tf_length(n, l, g, trap.s) * tf_unit_mu(trap.s).powf(1.0 / s);
    let interacting = match model {
        SupportModel::MeanField => tf,
        SupportModel::LiebLiniger => {
            let gt = solve_unit_limit(PointRule::Tonks, trap.s, None)?.support * ll_length(n, l, trap.s);
            tf.min(gt)
        }
    };
    Ok(ideal.max(interacting))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealSolution {
    pub energy: f64,
    /// `e∥` of the unit trap.
    pub e_par: f64,
    pub profile: DensityProfile,
}

/// Non-interacting gas: `E = N e∥/L²`, `ρ(z) = (N/L) ρ∥(z/L)`.
/// `grid` is for the unit trap and is chosen automatically when absent.
pub fn solve_ideal(n: f64, trap: &TrapSpec, grid: Option<Grid1D>) -> Result<IdealSolution> {
    trap.validate()?;
    let l = trap.length;
    let unit_trap = TrapSpec::new(trap.s, 1.0);
    let grid = match grid {
        Some(g) => g,
        None => auto_grid(1.0, &unit_trap, 0.0, SupportModel::MeanField, DEFAULT_POINTS)?,
    };
    let st = longitudinal_ground_state(&unit_trap, &grid)?;
    let values = st.profile.values.iter().map(|v| v * n / l).collect();
    Ok(IdealSolution {
        energy: n * st.e_par / (l * l),
        e_par: st.e_par,
        profile: DensityProfile::new(grid.scaled(l), values, n)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GpSolution {
    /// `E^GP(N, L, g)`.
    pub energy: f64,
    pub mu: f64,
    /// Minimizer of the reduced problem `(1, 1, NgL)`.
    pub unit: Minimizer,
    /// `ρ(z) = (N/L) ρ_{1,1,NgL}(z/L)`.
    pub profile: DensityProfile,
}

/// 1D Gross–Pitaevskii functional `∫|∂√ρ|² + V_Lρ + ½gρ²`, solved through
/// `E^GP(N,L,g) = (N/L²) E^GP(1,1,NgL)`. `grid` is for the reduced problem.
pub fn solve_gp_1d(
    n: f64,
    trap: &TrapSpec,
    g: f64,
    grid: Option<Grid1D>,
    opts: &MinimizeOptions,
) -> Result<GpSolution> {
    trap.validate()?;
    if !(g >= 0.0 && n > 0.0) {
        return Err(Error::InvalidInput(format!("need N > 0 and g ≥ 0, got N={n}, g={g}")));
    }
    let l = trap.length;
    let unit_trap = TrapSpec::new(trap.s, 1.0);
    let ngl = n * g * l;
    let grid = match grid {
        Some(g) => g,
        None => auto_grid(1.0, &unit_trap, ngl, SupportModel::MeanField, DEFAULT_POINTS)?,
    };
    let unit = minimize_functional(1.0, &unit_trap, &MeanField { g: ngl }, grid, opts)?;
    let values = unit.profile.values.iter().map(|v| v * n / l).collect();
    Ok(GpSolution {
        energy: n / (l * l) * unit.energy.total,
        mu: unit.mu / (l * l),
        profile: DensityProfile::new(grid.scaled(l), values, n)?,
        unit,
    })
}
