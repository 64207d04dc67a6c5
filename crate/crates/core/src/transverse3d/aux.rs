use serde::{Deserialize, Serialize};

use super::modes::{radial_operator, unsymmetrize, RadialGrid, TransverseKind};
use crate::error::{Error, Result};
use crate::numerics::descent::{descend, SphereProblem};
use crate::numerics::tridiag::SymTridiag;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuxMinimizer {
    pub p: f64,
    pub energy: f64,
    pub mu: f64,
    pub grid: RadialGrid,
    /// `φ_p` at the cell centers, `∫φ² d²x = 1`, positive.
    pub phi: Vec<f64>,
    pub sup_norm: f64,
}

/// Radially symmetric `∫|∇φ|² + V⊥φ² + pφ⁴` in `√(2πr h)`-scaled unknowns.
struct AuxProblem {
    op: SymTridiag,
    inv_w: Vec<f64>,
    p: f64,
}

impl SphereProblem for AuxProblem {
    fn weight(&self) -> f64 {
        1.0
    }

    fn energy(&self, v: &[f64]) -> f64 {
        let mut bv = vec![0.0; v.len()];
        self.op.apply(v, &mut bv);
        let quad: f64 = v.iter().zip(&bv).map(|(a, b)| a * b).sum();
        quad + self.p * v.iter().zip(&self.inv_w).map(|(x, iw)| x.powi(4) * iw).sum::<f64>()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut bv = vec![0.0; v.len()];
        self.op.apply(v, &mut bv);
        bv.iter_mut()
            .zip(v)
            .zip(&self.inv_w)
            .for_each(|((b, x), iw)| *b += 2.0 * self.p * x * x * x * iw);
        bv
    }

    fn precondition(&self, v: &[f64], mu: f64, sigma: f64, r: &[f64]) -> Option<Vec<f64>> {
        let diag = self
            .op
            .diag
            .iter()
            .zip(v)
            .zip(&self.inv_w)
            .map(|((d, x), iw)| d + 6.0 * self.p * x * x * iw + sigma)
            .collect();
        SymTridiag::new(diag, self.op.off.clone()).solve_spd_shifted(mu, r)
    }
}

/// Minimizer of the 2D functional `∫|∇φ|² + V⊥|φ|² + p|φ|⁴` with `∫|φ|² = 1`
/// over radial functions.
pub fn minimize_aux_2d(p: f64, kind: TransverseKind, grid: &RadialGrid, tol: f64) -> Result<AuxMinimizer> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "aux coupling must be nonnegative, got {p}"
        )));
    }
    let op = radial_operator(kind, grid, 0);
    let w = grid.weights();
    let problem = AuxProblem {
        inv_w: w.iter().map(|x| 1.0 / x).collect(),
        p,
        op,
    };
    let start: Vec<f64> = grid
        .radii()
        .iter()
        .zip(&w)
        .map(|(r, wi)| (-0.5 * r * r).exp().max(1e-3 * (1.0 - r / grid.r_max)) * wi.sqrt())
        .collect();
    let out = descend(&problem, start, 1.0, tol, 100_000, "auxiliary 2D minimizer")?;
    let phi = unsymmetrize(grid, &out.x);
    let sup_norm = phi.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    Ok(AuxMinimizer {
        p,
        energy: out.energy,
        mu: out.mu,
        grid: *grid,
        phi,
        sup_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse3d::modes::transverse_ground_state;

    fn grid() -> RadialGrid {
        RadialGrid::for_kind(TransverseKind::Harmonic, 256).unwrap()
    }

    #[test]
    fn zero_coupling_is_linear_ground_state() {
        let a = minimize_aux_2d(0.0, TransverseKind::Harmonic, &grid(), 1e-10).unwrap();
        let mode = transverse_ground_state(TransverseKind::Harmonic, &grid()).unwrap();
        assert!((a.energy - mode.e_perp_grid).abs() < 1e-10);
        for (x, b) in a.phi.iter().zip(&mode.b_profile) {
            assert!((x - b).abs() < 1e-6);
        }
    }

    #[test]
    fn bracketed_by_trial_bounds() {
        let mode = transverse_ground_state(TransverseKind::Harmonic, &grid()).unwrap();
        let b4: f64 = grid()
            .weights()
            .iter()
            .zip(&mode.b_profile)
            .map(|(w, b)| w * b.powi(4))
            .sum();
        let bsq = mode.b_sup_sq;
        let mut last = mode.e_perp_grid;
        for p in [0.05, 0.2, 1.0, 5.0] {
            let a = minimize_aux_2d(p, TransverseKind::Harmonic, &grid(), 1e-10).unwrap();
            assert!(a.energy <= mode.e_perp_grid + p * b4 + 1e-10);
            assert!(a.energy >= last);
            last = a.energy;
            let denom = mode.gap - 2.0 * p * bsq;
            if denom > 0.0 {
                let lower = mode.e_perp_grid + p * b4 * (1.0 - 4.0 * p * bsq / denom);
                assert!(a.energy >= lower, "p={p}: {} < {lower}", a.energy);
            }
        }
    }

    #[test]
    fn sup_norm_stays_bounded() {
        let s0 = minimize_aux_2d(0.0, TransverseKind::Harmonic, &grid(), 1e-9)
            .unwrap()
            .sup_norm;
        for p in [1.0, 10.0] {
            let s = minimize_aux_2d(p, TransverseKind::Harmonic, &grid(), 1e-9)
                .unwrap()
                .sup_norm;
            assert!(s <= 2.0 * s0 && s < s0);
        }
    }
}
