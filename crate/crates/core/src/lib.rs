//! Ground states of elongated trapped Bose gases in one effective
//! dimension: the Lieb–Liniger energy, density functionals and their
//! regime limits, the 3D to 1D crossover, and independent reference
//! computations for the bounds they satisfy.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod functional;
pub mod ll_core;
pub mod numerics;
pub mod oracles;
pub mod regimes;
pub mod transverse3d;

pub use error::{Error, Result};
