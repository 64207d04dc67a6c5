use serde::{Deserialize, Serialize};

use super::profile::{mean_density, DensityProfile};
use crate::ll_core::LLEnergyTable;
use crate::regimes::GasParams;

/// Upper limits for the smallness conditions of the 1D description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityThresholds {
    pub energy_per_gap: f64,
    pub a_over_r: f64,
    pub r_over_l: f64,
    pub diluteness: f64,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self {
            energy_per_gap: 0.1,
            a_over_r: 0.1,
            r_over_l: 0.1,
            diluteness: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityRecord {
    pub rhobar: f64,
    /// `ρ̄² e(g/ρ̄) · r²`: longitudinal energy per particle over the transverse scale.
    pub energy_per_gap: f64,
    pub a_over_r: f64,
    pub r_over_l: f64,
    /// `a² g ρ̄`, the 3D gas parameter.
    pub diluteness: f64,
    pub energy_per_gap_ok: bool,
    pub a_over_r_ok: bool,
    pub r_over_l_ok: bool,
    pub diluteness_ok: bool,
    pub valid: bool,
}

pub fn validity_from_mean_density(
    params: &GasParams,
    g: f64,
    rhobar: f64,
    table: &LLEnergyTable,
    th: &ValidityThresholds,
) -> ValidityRecord {
    let e1d = if rhobar > 0.0 {
        rhobar * rhobar * table.eval_e(g / rhobar).e
    } else {
        0.0
    };
    let energy_per_gap = e1d * params.r * params.r;
    let a_over_r = params.a / params.r;
    let r_over_l = params.r / params.l;
    let diluteness = params.a * params.a * g * rhobar;
    let energy_per_gap_ok = energy_per_gap < th.energy_per_gap;
    let a_over_r_ok = a_over_r < th.a_over_r;
    let r_over_l_ok = r_over_l < th.r_over_l;
    let diluteness_ok = diluteness < th.diluteness;
    ValidityRecord {
        rhobar,
        energy_per_gap,
        a_over_r,
        r_over_l,
        diluteness,
        energy_per_gap_ok,
        a_over_r_ok,
        r_over_l_ok,
        diluteness_ok,
        valid: energy_per_gap_ok && a_over_r_ok && r_over_l_ok && diluteness_ok,
    }
}

/// Smallness conditions evaluated at the mean density of a computed profile.
pub fn validity_check(params: &GasParams, rho: &DensityProfile, table: &LLEnergyTable) -> ValidityRecord {
    validity_from_mean_density(
        params,
        params.coupling(),
        mean_density(rho),
        table,
        &ValidityThresholds::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{Grid1D, TrapExponent};
    use crate::transverse3d::TransverseKind;

    fn params(r: f64, a: f64, l: f64) -> GasParams {
        GasParams::new(100.0, l, r, a, TrapExponent::harmonic(), TransverseKind::Harmonic)
    }

    fn gaussian(n: f64, l: f64) -> DensityProfile {
        let grid = Grid1D::symmetric(8.0 * l, 2001).unwrap();
        DensityProfile::from_fn(grid, n, |z| {
            n * (-(z / l).powi(2)).exp() / (l * std::f64::consts::PI.sqrt())
        })
    }

    #[test]
    fn deep_one_dimensional_limit_passes() {
        let p = params(1e-3, 1e-6, 1.0);
        let v = validity_check(&p, &gaussian(100.0, 1.0), LLEnergyTable::standard());
        assert!(v.valid, "{v:?}");
        assert!(v.energy_per_gap < 1e-2);
    }

    #[test]
    fn thick_trap_fails_aspect_ratio() {
        let p = params(1.0, 1e-6, 1.0);
        let v = validity_check(&p, &gaussian(100.0, 1.0), LLEnergyTable::standard());
        assert!(!v.r_over_l_ok && !v.valid);
    }
}
