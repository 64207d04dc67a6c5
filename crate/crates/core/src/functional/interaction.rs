use std::f64::consts::PI;

use crate::ll_core::LLEnergyTable;

/// Local energy density `F(ρ)` of a density functional.
pub trait LocalEnergy: Sync {
    /// `(F, F′, F″)` at `ρ ≥ 0`. `F″` only steers preconditioning and may be approximate.
    fn eval(&self, rho: f64) -> (f64, f64, f64);
}

/// `F = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoInteraction;

impl LocalEnergy for NoInteraction {
    fn eval(&self, _rho: f64) -> (f64, f64, f64) {
        (0.0, 0.0, 0.0)
    }
}

/// Mean-field `F = ½gρ²`.
#[derive(Debug, Clone, Copy)]
pub struct MeanField {
    pub g: f64,
}

impl LocalEnergy for MeanField {
    fn eval(&self, rho: f64) -> (f64, f64, f64) {
        (0.5 * self.g * rho * rho, self.g * rho, self.g)
    }
}

/// Fermionized `F = (π²/3)ρ³`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tonks;

impl LocalEnergy for Tonks {
    fn eval(&self, rho: f64) -> (f64, f64, f64) {
        let p2 = PI * PI;
        (p2 / 3.0 * rho * rho * rho, p2 * rho * rho, 2.0 * p2 * rho)
    }
}

/// `F = ρ³e(g/ρ)` from the tabulated Lieb–Liniger energy.
#[derive(Debug, Clone, Copy)]
pub struct LiebLiniger<'a> {
    pub g: f64,
    pub table: &'a LLEnergyTable,
}

impl LocalEnergy for LiebLiniger<'_> {
    fn eval(&self, rho: f64) -> (f64, f64, f64) {
        if rho <= 0.0 || self.g <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let g = self.g;
        let (e, de, d2e) = self.table.eval_full(g / rho);
        let f = rho * rho * rho * e;
        let f1 = 3.0 * rho * rho * e - g * rho * de;
        let f2 = 6.0 * rho * e - 4.0 * g * de + g * g / rho * d2e;
        (f, f1, f2.max(0.0))
    }
}
