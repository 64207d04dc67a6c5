//! Independent reference computations and explicit bounds.

mod bethe;
mod bounds;
mod chain;
mod fewbody;
mod smearing;
mod superadditive;

pub use bethe::{bethe_ground_state, finite_size_e, ground_quantum_numbers, BetheState, MAX_PARTICLES};
pub use bounds::{
    hardcore_upper_bound, lower_bound_explicit, random_temple_trial, temple_lower_bound, ExplicitBound, TempleTrial,
};
pub use chain::{bc_chain, write_bounds_csv, BoundsFlags, BoundsRecord, BOUNDS_CSV_HEADER};
pub use fewbody::{grid_fewbody_energy, grid_level, BoundaryCondition, FewBodyEnergy, DEFAULT_MEMORY_CAP};
pub use smearing::{delta_smearing_floor, SmearingFloor};
pub use superadditive::{
    excess_pairs, random_convex_energy, random_superadditive_trial, superadditive_bound, tightest_k, SuperadditiveCheck,
};
