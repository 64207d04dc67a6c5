use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on `[z_min, z_max]`, endpoints included. Solvers on this
/// grid hold the amplitude at zero on both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
}

pub const MIN_POINTS: usize = 64;

impl Grid1D {
    pub fn new(z_min: f64, z_max: f64, n_points: usize) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        if !(z_max > z_min) || !z_min.is_finite() || !z_max.is_finite() {
            return Err(Error::InvalidInput(format!("bad grid interval [{z_min}, {z_max}]")));
        }
        Ok(Self { z_min, z_max, n_points })
    }

    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn spacing(&self) -> f64 {
        (self.z_max - self.z_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.z_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            z_min: self.z_min * factor,
            z_max: self.z_max * factor,
            n_points: self.n_points,
        }
    }
}
