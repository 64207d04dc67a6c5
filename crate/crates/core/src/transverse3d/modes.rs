use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::richardson;
use crate::numerics::tridiag::SymTridiag;

/// Shape of the transverse confinement in units of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransverseKind {
    /// `V⊥(x) = |x|²`.
    Harmonic,
    /// Hard-walled disk of radius 1.
    HardWallDisk,
}

/// Cell-centered radial grid `r_i = (i + ½)h` on `[0, r_max]` with a
/// Dirichlet wall at `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n_cells: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_cells: usize) -> Result<Self> {
        if !(r_max > 0.0) || n_cells < 16 {
            return Err(Error::InvalidInput(format!(
                "bad radial grid r_max={r_max}, n_cells={n_cells}"
            )));
        }
        Ok(Self { r_max, n_cells })
    }

    /// Default grid for `kind`: radius 8 for the oscillator, the disk itself otherwise.
    pub fn for_kind(kind: TransverseKind, n_cells: usize) -> Result<Self> {
        match kind {
            TransverseKind::Harmonic => Self::new(8.0, n_cells),
            TransverseKind::HardWallDisk => Self::new(1.0, n_cells),
        }
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / self.n_cells as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.radius(i)).collect()
    }

    /// Area weights `2π r_i h`.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        self.radii().iter().map(|r| 2.0 * PI * r * h).collect()
    }

    pub fn refined(&self) -> Self {
        Self {
            n_cells: 2 * self.n_cells,
            ..*self
        }
    }
}

pub(crate) fn potential(kind: TransverseKind, r: f64) -> f64 {
    match kind {
        TransverseKind::Harmonic => r * r,
        TransverseKind::HardWallDisk => 0.0,
    }
}

/// `−(1/r)(r u′)′ + m²u/r² + V u` symmetrized by `√r`.
pub(crate) fn radial_operator(kind: TransverseKind, grid: &RadialGrid, m: u32) -> SymTridiag {
    let n = grid.n_cells;
    let h = grid.spacing();
    let ih2 = 1.0 / (h * h);
    let r: Vec<f64> = grid.radii();
    let m2 = (m * m) as f64;
    let diag = (0..n)
        .map(|i| {
            let inner = i as f64 * h;
            let outer = (i as f64 + 1.0) * h;
            let wall = if i + 1 == n { 2.0 } else { 1.0 };
            (inner + wall * outer) * ih2 / r[i] + potential(kind, r[i]) + m2 / (r[i] * r[i])
        })
        .collect();
    let off = (0..n - 1)
        .map(|i| -((i as f64 + 1.0) * h) * ih2 / (r[i] * r[i + 1]).sqrt())
        .collect();
    SymTridiag::new(diag, off)
}

/// Converts a symmetrized eigenvector to `b` normalized in `∫|b|² d²x = 1`.
pub(crate) fn unsymmetrize(grid: &RadialGrid, v: &[f64]) -> Vec<f64> {
    let w = grid.weights();
    let mut b: Vec<f64> = v.iter().zip(&w).map(|(x, wi)| x / wi.sqrt()).collect();
    let norm: f64 = b.iter().zip(&w).map(|(x, wi)| wi * x * x).sum::<f64>().sqrt();
    let sign = if b[0] < 0.0 { -1.0 } else { 1.0 };
    b.iter_mut().for_each(|x| *x *= sign / norm);
    b
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransverseMode {
    pub kind: TransverseKind,
    /// Ground energy of `−Δ⊥ + V⊥`, extrapolated in the grid spacing.
    pub e_perp: f64,
    /// Distance to the first excited level over all angular momenta.
    pub gap: f64,
    /// `∫ b⁴ d²x`, extrapolated.
    pub b4_integral: f64,
    /// `max b²`.
    pub b_sup_sq: f64,
    /// Ground energy on the given grid, before extrapolation.
    pub e_perp_grid: f64,
    pub grid: RadialGrid,
    pub b_profile: Vec<f64>,
}

impl TransverseMode {
    pub fn radii(&self) -> Vec<f64> {
        self.grid.radii()
    }

    pub fn normalization(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.b_profile)
            .map(|(w, b)| w * b * b)
            .sum()
    }

    /// Cached mode on a 1024-cell default grid.
    pub fn standard(kind: TransverseKind) -> &'static TransverseMode {
        static HARMONIC: OnceLock<TransverseMode> = OnceLock::new();
        static DISK: OnceLock<TransverseMode> = OnceLock::new();
        let cell = match kind {
            TransverseKind::Harmonic => &HARMONIC,
            TransverseKind::HardWallDisk => &DISK,
        };
        cell.get_or_init(|| {
            let grid = RadialGrid::for_kind(kind, 1024).expect("default radial grid");
            transverse_ground_state(kind, &grid).expect("default transverse grid resolves the mode")
        })
    }
}

struct Levels {
    e0: f64,
    e1: f64,
    b4: f64,
    b: Vec<f64>,
}

fn levels(kind: TransverseKind, grid: &RadialGrid) -> Levels {
    let op0 = radial_operator(kind, grid, 0);
    let e0 = op0.eigenvalue(0);
    let excited_radial = op0.eigenvalue(1);
    let excited_angular = radial_operator(kind, grid, 1).eigenvalue(0);
    let b = unsymmetrize(grid, &op0.eigenvector(e0));
    let b4 = grid.weights().iter().zip(&b).map(|(w, x)| w * x.powi(4)).sum();
    Levels {
        e0,
        e1: excited_radial.min(excited_angular),
        b4,
        b,
    }
}

/// Ground state of `−Δ⊥ + V⊥` for `kind` and the gap to the next level.
///
/// Energies and `∫b⁴` are Richardson-extrapolated against the halved grid.
pub fn transverse_ground_state(kind: TransverseKind, grid: &RadialGrid) -> Result<TransverseMode> {
    if kind == TransverseKind::HardWallDisk && (grid.r_max - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(
            "the hard-wall disk grid must end at radius 1".into(),
        ));
    }
    let coarse = levels(kind, grid);
    let fine = levels(kind, &grid.refined());
    if (coarse.e0 - fine.e0).abs() > 1e-3 * fine.e0 {
        return Err(Error::UnderResolved(format!(
            "transverse energy moved from {} to {} under refinement",
            coarse.e0, fine.e0
        )));
    }
    let e_perp = richardson(coarse.e0, fine.e0, 2);
    let e1 = richardson(coarse.e1, fine.e1, 2);
    let gap = e1 - e_perp;
    if !(gap > 0.0) {
        return Err(Error::UnderResolved(format!("non-positive transverse gap {gap}")));
    }
    Ok(TransverseMode {
        kind,
        e_perp,
        gap,
        b4_integral: richardson(coarse.b4, fine.b4, 2),
        b_sup_sq: coarse.b.iter().fold(0.0f64, |a, x| a.max(x * x)),
        e_perp_grid: coarse.e0,
        grid: *grid,
        b_profile: coarse.b,
    })
}

/// `g = (8πa/r²) ∫ b⁴`.
pub fn effective_g(a: f64, r: f64, mode: &TransverseMode) -> f64 {
    8.0 * PI * a / (r * r) * mode.b4_integral
}

#[cfg(test)]
mod tests {
    use super::*;

    const J01: f64 = 2.404_825_557_695_773;

    #[test]
    fn harmonic_mode() {
        let m = transverse_ground_state(
            TransverseKind::Harmonic,
            &RadialGrid::for_kind(TransverseKind::Harmonic, 1024).unwrap(),
        )
        .unwrap();
        assert!((m.e_perp - 2.0).abs() < 1e-6, "{}", m.e_perp);
        assert!((m.b4_integral - 1.0 / (2.0 * PI)).abs() < 1e-6, "{}", m.b4_integral);
        assert!((m.gap - 2.0).abs() < 1e-5, "{}", m.gap);
        assert!((m.normalization() - 1.0).abs() < 1e-10);
        assert!(m.b_profile.iter().all(|b| *b > 0.0));
    }

    #[test]
    fn disk_mode() {
        let m = TransverseMode::standard(TransverseKind::HardWallDisk);
        assert!((m.e_perp - J01 * J01).abs() < 1e-4, "{}", m.e_perp);
        assert!((m.normalization() - 1.0).abs() < 1e-10);
        // first angular level j11² − j01²
        assert!(
            (m.gap - (3.831_705_970_207_512f64.powi(2) - J01 * J01)).abs() < 1e-3,
            "{}",
            m.gap
        );
    }

    #[test]
    fn coupling_scaling() {
        let m = TransverseMode::standard(TransverseKind::Harmonic);
        assert!((effective_g(1e-6, 1e-3, m) - 4.0).abs() < 1e-5);
        assert_eq!(effective_g(0.0, 1e-3, m), 0.0);
        let ratio = effective_g(1e-6, 2e-3, m) / effective_g(1e-6, 1e-3, m);
        assert!((ratio - 0.25).abs() < 1e-14);
    }

    #[test]
    fn disk_grid_must_match_wall() {
        let g = RadialGrid::new(2.0, 128).unwrap();
        assert!(transverse_ground_state(TransverseKind::HardWallDisk, &g).is_err());
    }
}
