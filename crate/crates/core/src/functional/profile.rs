use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use crate::error::{Error, Result};
use crate::numerics::quadrature::trapezoid;

/// Sampled density on a [`Grid1D`] with its target mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub mass: f64,
}

impl DensityProfile {
    pub fn new(grid: Grid1D, values: Vec<f64>, mass: f64) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::InvalidInput(format!(
                "profile has {} samples for a {}-point grid",
                values.len(),
                grid.n_points
            )));
        }
        Ok(Self { grid, values, mass })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(grid: Grid1D, mass: f64, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self { grid, values, mass }
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.grid.spacing())
    }

    /// Checks nonnegativity, mass (relative `mass_tol`) and decay at the
    /// domain edges to below `edge_tol · max`.
    pub fn validate(&self, mass_tol: f64, edge_tol: f64) -> Result<()> {
        if let Some(v) = self.values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::InvalidInput(format!("negative or NaN density sample {v}")));
        }
        let m = self.integral();
        if (m - self.mass).abs() > mass_tol * self.mass.abs() {
            return Err(Error::InvalidInput(format!(
                "mass {m} differs from target {}",
                self.mass
            )));
        }
        let max = self.max();
        let n = self.values.len();
        let edge = self.values[..2]
            .iter()
            .chain(&self.values[n - 2..])
            .fold(0.0f64, |a, &b| a.max(b));
        if edge > edge_tol * max {
            return Err(Error::DomainTooSmall { leaked: edge / max });
        }
        Ok(())
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &b| a.max(b))
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.grid.point(i), v))
    }

    /// Linear interpolation, zero outside the grid.
    pub fn sample(&self, z: f64) -> f64 {
        let h = self.grid.spacing();
        let x = (z - self.grid.z_min) / h;
        if x < 0.0 || x > (self.grid.n_points - 1) as f64 {
            return 0.0;
        }
        let i = (x.floor() as usize).min(self.grid.n_points - 2);
        let f = x - i as f64;
        (1.0 - f) * self.values[i] + f * self.values[i + 1]
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "z,rho")?;
        for (z, v) in self.points() {
            writeln!(w, "{z:.12e},{v:.12e}")?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(f)
    }
}

/// Mean 1D density `ρ̄ = (1/N) ∫ ρ²`.
pub fn mean_density(rho: &DensityProfile) -> f64 {
    let sq: Vec<f64> = rho.values.iter().map(|v| v * v).collect();
    trapezoid(&sq, rho.grid.spacing()) / rho.mass
}

/// Energy split of a 1D functional. All terms in units of `1/length²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub potential: f64,
    pub interaction: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(kinetic: f64, potential: f64, interaction: f64) -> Self {
        Self {
            kinetic,
            potential,
            interaction,
            total: kinetic + potential + interaction,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            self.kinetic * factor,
            self.potential * factor,
            self.interaction * factor,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_box_mean_density() {
        let grid = Grid1D::new(0.0, 4.0, 401).unwrap();
        let p = DensityProfile::from_fn(grid, 12.0, |_| 3.0);
        assert!((mean_density(&p) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dilation_halves_mean_density() {
        let g1 = Grid1D::symmetric(10.0, 4001).unwrap();
        let g2 = g1.scaled(2.0);
        let a = DensityProfile::from_fn(g1, 1.0, |z| (-z * z).exp() / std::f64::consts::PI.sqrt());
        let b = DensityProfile::from_fn(g2, 1.0, |z| {
            0.5 * (-(z / 2.0).powi(2)).exp() / std::f64::consts::PI.sqrt()
        });
        assert!((mean_density(&b) / mean_density(&a) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn csv_header() {
        let p = DensityProfile::from_fn(Grid1D::symmetric(1.0, 64).unwrap(), 1.0, |_| 0.5);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("z,rho\n"));
        assert_eq!(text.lines().count(), 65);
    }
}
