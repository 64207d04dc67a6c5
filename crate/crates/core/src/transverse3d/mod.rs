//! Transverse confinement: ground modes, the effective 1D coupling, and
//! the radially symmetric 3D and auxiliary 2D Gross–Pitaevskii solvers.

mod aux;
mod gp3d;
mod modes;

pub use aux::{minimize_aux_2d, AuxMinimizer};
pub use gp3d::{
    crossover_ratio, minimize_gp_3d, minimize_gp_3d_unit, scattering_length_for, CrossoverPoint, Field2D, Gp3dGrids,
    Gp3dResult,
};
pub use modes::{effective_g, transverse_ground_state, RadialGrid, TransverseKind, TransverseMode};
