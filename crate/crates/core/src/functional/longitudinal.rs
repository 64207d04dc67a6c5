use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use super::profile::DensityProfile;
use super::trap::TrapSpec;
use crate::error::{Error, Result};
use crate::numerics::richardson;
use crate::numerics::tridiag::SymTridiag;

/// Relative eigenvalue shift under grid halving above which the grid is
/// reported as under-resolved.
pub const REFINEMENT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LongitudinalState {
    /// Lowest eigenvalue of `−d²/dz² + V`, extrapolated in the grid spacing.
    pub e_par: f64,
    /// Unextrapolated eigenvalue on the given grid.
    pub e_par_grid: f64,
    /// `|ψ|²` normalized to unit mass.
    pub profile: DensityProfile,
}

fn dirichlet_operator(trap: &TrapSpec, grid: &Grid1D) -> SymTridiag {
    let h = grid.spacing();
    let ih2 = 1.0 / (h * h);
    let n = grid.n_points;
    let diag = (1..n - 1)
        .map(|i| 2.0 * ih2 + finite(trap.potential(grid.point(i))))
        .collect();
    SymTridiag::new(diag, vec![-ih2; n - 3])
}

fn finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

pub(crate) fn check_grid(trap: &TrapSpec, grid: &Grid1D) -> Result<()> {
    trap.validate()?;
    if trap.is_hard_wall() {
        let l = trap.length * (1.0 + 1e-12);
        if grid.z_min < -l || grid.z_max > l {
            return Err(Error::InvalidInput("grid extends beyond the hard walls".into()));
        }
    }
    Ok(())
}

/// Lowest eigenpair of `−d²/dz² + V_L` with Dirichlet ends on `grid`.
/// The eigenvalue is Richardson-extrapolated against the halved grid.
pub fn longitudinal_ground_state(trap: &TrapSpec, grid: &Grid1D) -> Result<LongitudinalState> {
    check_grid(trap, grid)?;
    let op = dirichlet_operator(trap, grid);
    let coarse = op.eigenvalue(0);
    let fine = dirichlet_operator(trap, &grid.refined()).eigenvalue(0);
    if (coarse - fine).abs() > REFINEMENT_TOL * fine.abs() {
        return Err(Error::UnderResolved(format!(
            "longitudinal eigenvalue moved from {coarse} to {fine} under refinement"
        )));
    }
    let v = op.eigenvector(coarse);
    let mut values = vec![0.0; grid.n_points];
    for (i, x) in v.iter().enumerate() {
        values[i + 1] = x * x;
    }
    let norm: f64 = values.iter().sum::<f64>() * grid.spacing();
    values.iter_mut().for_each(|x| *x /= norm);
    Ok(LongitudinalState {
        e_par: richardson(coarse, fine, 2),
        e_par_grid: coarse,
        profile: DensityProfile::new(*grid, values, 1.0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::trap::TrapExponent;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_oscillator() {
        let st = longitudinal_ground_state(&TrapSpec::harmonic(1.0), &Grid1D::symmetric(8.0, 2049).unwrap()).unwrap();
        assert!((st.e_par - 1.0).abs() < 1e-6, "{}", st.e_par);
        let gauss = |z: f64| (-z * z).exp() / PI.sqrt();
        for (z, v) in st.profile.points() {
            assert!((v - gauss(z)).abs() < 1e-4);
        }
    }

    #[test]
    fn particle_in_a_box() {
        let st = longitudinal_ground_state(&TrapSpec::hard_wall(1.0), &Grid1D::symmetric(1.0, 1025).unwrap()).unwrap();
        assert!((st.e_par - PI * PI / 4.0).abs() < 1e-6, "{}", st.e_par);
    }

    #[test]
    fn quartic_is_self_convergent() {
        let trap = TrapSpec::new(TrapExponent::Power(4.0), 1.0);
        let g = Grid1D::symmetric(5.0, 2049).unwrap();
        let a = longitudinal_ground_state(&trap, &g).unwrap().e_par;
        let b = longitudinal_ground_state(&trap, &g.refined()).unwrap().e_par;
        assert!((a - b).abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn scales_with_length() {
        let a = longitudinal_ground_state(&TrapSpec::harmonic(1.0), &Grid1D::symmetric(8.0, 1025).unwrap()).unwrap();
        let b = longitudinal_ground_state(&TrapSpec::harmonic(2.0), &Grid1D::symmetric(16.0, 1025).unwrap()).unwrap();
        assert!((b.e_par_grid * 4.0 - a.e_par_grid).abs() < 1e-10);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let r = longitudinal_ground_state(&TrapSpec::harmonic(1.0), &Grid1D::symmetric(30.0, 64).unwrap());
        assert!(matches!(r, Err(Error::UnderResolved(_))));
    }

    #[test]
    fn grid_outside_box_is_rejected() {
        assert!(longitudinal_ground_state(&TrapSpec::hard_wall(1.0), &Grid1D::symmetric(2.0, 128).unwrap()).is_err());
    }
}
