//! Homogeneous Lieb–Liniger ground-state energy `e(t)` and the local energy
//! density `ρ³e(g/ρ)` built on it.

mod nystrom;
mod table;

pub use nystrom::{solve_ll_point, LLPoint};
pub use table::{
    energy_density, energy_density_derivative, eval_e, strong_series, weak_series, LLEnergyTable, TableSpec,
};

/// `e(t) → π²/3` as `t → ∞`.
pub const FERMI_LIMIT: f64 = std::f64::consts::PI * std::f64::consts::PI / 3.0;
