use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::tridiag::SymTridiag;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmearingFloor {
    /// Half-width `B·arctan(BA/2α)` of the compensating well.
    pub well_half_width: f64,
    pub min_eigenvalue: f64,
    pub mesh: f64,
}

/// Lowest eigenvalue of `−α∂² + Aδ(z−z₀) − (α/B²)θ(R − |z−z₀|)` on
/// `[0, ℓ]` with Neumann ends, `R = B·arctan(BA/2α)`. The continuum operator
/// is non-negative with a zero mode, so the result measures the mesh error.
///
/// Nodes sit at `ih`; the delta is split between the two nearest nodes and
/// the well is averaged over each node's cell.
pub fn delta_smearing_floor(a: f64, b: f64, alpha: f64, ell: f64, z0: f64, mesh: f64) -> Result<SmearingFloor> {
    if !(a >= 0.0 && b > 0.0 && alpha > 0.0 && ell > 0.0 && mesh > 0.0 && z0 > 0.0 && z0 < ell) {
        return Err(Error::InvalidInput(format!(
            "need A ≥ 0, B, α, ℓ, mesh > 0 and 0 < z₀ < ℓ; got A = {a}, B = {b}, α = {alpha}, ℓ = {ell}, z₀ = {z0}, mesh = {mesh}"
        )));
    }
    let r = b * (b * a / (2.0 * alpha)).atan();
    if r > z0.min(ell - z0) {
        return Err(Error::Precondition(format!(
            "well half-width {r} exceeds the distance {} to the boundary",
            z0.min(ell - z0)
        )));
    }
    let cells = (ell / mesh).round().max(2.0) as usize;
    let h = ell / cells as f64;
    let n = cells + 1;
    let k = alpha / (h * h);
    let depth = alpha / (b * b);

    // nodes 0 and n−1 carry half weight; the symmetric form is scaled by it
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5f64 } else { 1.0 };
    let mut pot = vec![0.0; n];
    let (lo, hi) = (z0 - r, z0 + r);
    for (i, p) in pot.iter_mut().enumerate() {
        let zi = i as f64 * h;
        let cell_lo = (zi - 0.5 * h).max(0.0);
        let cell_hi = (zi + 0.5 * h).min(ell);
        let overlap = (cell_hi.min(hi) - cell_lo.max(lo)).max(0.0);
        *p -= depth * overlap / (weight(i) * h);
    }
    let pos = z0 / h;
    let left = pos.floor() as usize;
    let frac = pos - left as f64;
    pot[left] += a * (1.0 - frac) / (weight(left) * h);
    if frac > 0.0 {
        pot[left + 1] += a * frac / (weight(left + 1) * h);
    }

    let diag: Vec<f64> = pot.iter().map(|p| 2.0 * k + p).collect();
    let off: Vec<f64> = (0..n - 1).map(|i| -k / (weight(i) * weight(i + 1)).sqrt()).collect();
    let t = SymTridiag::new(diag, off);
    // bisection alone is limited to roundoff of the stencil scale α/h²; the
    // Rayleigh quotient in difference form resolves the near-zero level
    let y = t.eigenvector(t.eigenvalue(0));
    let x: Vec<f64> = y.iter().enumerate().map(|(i, v)| v / weight(i).sqrt()).collect();
    let stiffness: f64 = x.windows(2).map(|w| k * (w[1] - w[0]).powi(2)).sum::<f64>()
        + x.iter()
            .enumerate()
            .map(|(i, v)| weight(i) * pot[i] * v * v)
            .sum::<f64>();
    let norm: f64 = x.iter().enumerate().map(|(i, v)| weight(i) * v * v).sum();
    let min_eigenvalue = stiffness / norm;
    Ok(SmearingFloor {
        well_half_width: r,
        min_eigenvalue,
        mesh: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_is_resolved() {
        let f = delta_smearing_floor(1.0, 1.0, 1.0, 4.0, 2.0, 1e-3).unwrap();
        assert!(f.min_eigenvalue.abs() < 1e-3, "{f:?}");
        let fine = delta_smearing_floor(1.0, 1.0, 1.0, 4.0, 2.0, 5e-4).unwrap();
        assert!(
            fine.min_eigenvalue.abs() * 2.0 <= f.min_eigenvalue.abs(),
            "{f:?} {fine:?}"
        );
    }

    #[test]
    fn no_delta_means_no_well() {
        let f = delta_smearing_floor(0.0, 1.0, 1.0, 4.0, 2.0, 1e-2).unwrap();
        assert_eq!(f.well_half_width, 0.0);
        assert!(f.min_eigenvalue.abs() < 1e-8, "{f:?}");
    }

    #[test]
    fn well_must_fit() {
        assert!(delta_smearing_floor(100.0, 1.0, 1.0, 4.0, 0.5, 1e-2).is_err());
    }
}
