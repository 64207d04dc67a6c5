//! Regime-limit functionals, their scaling reductions, and the Region 1–5
//! classifier.

mod classify;
mod limits;
mod params;
mod solvers;

pub use classify::{classify, classify_with, regional_mean_density, RegimeReport, Region, Thresholds};
pub use limits::{
    solve_gt, solve_ll_functional, solve_tf, solve_unit_limit, tf_unit_mu, LimitSolution, PointRule, UnitLimit,
};
pub use params::{density_parameter, ll_length, tf_length, GasParams};
pub use solvers::{solve_gp_1d, solve_ideal, support_half_width, GpSolution, IdealSolution, SupportModel};
