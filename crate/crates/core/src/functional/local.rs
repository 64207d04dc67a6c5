use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use super::interaction::LocalEnergy;
use super::profile::DensityProfile;
use super::trap::TrapSpec;
use crate::error::{Error, Result};
use crate::numerics::roots::brent;

/// Minimizer of a gradient-free functional `∫ Vρ + F(ρ)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalMinimizer {
    pub profile: DensityProfile,
    pub potential_energy: f64,
    pub interaction_energy: f64,
    pub energy: f64,
    pub mu: f64,
    pub iterations: usize,
    /// Largest KKT violation relative to `|μ|`.
    pub residual: f64,
}

/// Minimizes `h Σ (V_i ρ_i + F(ρ_i))` over `ρ ≥ 0` with `h Σ ρ_i = mass`
/// by diagonally scaled projected gradient steps. The projection onto the
/// constraint set in the scaled metric is exact (one-dimensional root-find
/// for the multiplier); steps backtrack on the energy.
///
/// The endpoints are held at zero, matching [`super::minimize_functional`].
pub fn minimize_local(
    mass: f64,
    trap: &TrapSpec,
    local: &dyn LocalEnergy,
    grid: Grid1D,
    tol: f64,
    max_iter: usize,
) -> Result<LocalMinimizer> {
    super::longitudinal::check_grid(trap, &grid)?;
    if !(mass > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidInput("mass and tolerance must be positive".into()));
    }
    let n = grid.n_points;
    let h = grid.spacing();
    let v: Vec<f64> = grid.points()[1..n - 1]
        .iter()
        .map(|&z| {
            let p = trap.potential(z);
            if p.is_finite() {
                p
            } else {
                0.0
            }
        })
        .collect();
    let m = v.len();
    let energy = |rho: &[f64]| -> f64 { h * rho.iter().zip(&v).map(|(r, vi)| vi * r + local.eval(*r).0).sum::<f64>() };

    let mut rho = vec![mass / (h * m as f64); m];
    let mut e = energy(&rho);
    let mut alpha: f64 = 1.0;
    let mut iterations = 0;
    let (mut mu, mut kkt) = kkt_residual(&rho, &v, local);
    while kkt > tol {
        if iterations >= max_iter {
            return Err(Error::NonConvergence {
                what: "local functional minimizer",
                iterations,
                residual: kkt,
            });
        }
        iterations += 1;
        let grad: Vec<f64> = rho.iter().zip(&v).map(|(r, vi)| vi + local.eval(*r).1).collect();
        let mean_rho = mass / (h * m as f64);
        let floor = 1e-3 * local.eval(mean_rho).2.max(1e-12);
        let metric: Vec<f64> = rho.iter().map(|r| local.eval(*r).2.max(floor)).collect();

        alpha = (2.0 * alpha).min(1.0);
        let mut accepted = false;
        while alpha > 1e-14 {
            let trial = project(&rho, &grad, &metric, alpha, mass, h)?;
            let et = energy(&trial);
            if et <= e {
                rho = trial;
                e = et;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        let (nmu, nkkt) = kkt_residual(&rho, &v, local);
        if !accepted && nkkt > tol {
            return Err(Error::NonConvergence {
                what: "local functional line search",
                iterations,
                residual: nkkt,
            });
        }
        mu = nmu;
        kkt = nkkt;
    }

    let mut values = vec![0.0; n];
    values[1..n - 1].copy_from_slice(&rho);
    let potential_energy = h * rho.iter().zip(&v).map(|(r, vi)| vi * r).sum::<f64>();
    Ok(LocalMinimizer {
        profile: DensityProfile::new(grid, values, mass)?,
        potential_energy,
        interaction_energy: e - potential_energy,
        energy: e,
        mu,
        iterations,
        residual: kkt,
    })
}

/// `ρ_i(θ) = [ρ_i − α(G_i − θ)/D_i]₊` with `θ` fixing the mass.
fn project(rho: &[f64], grad: &[f64], metric: &[f64], alpha: f64, mass: f64, h: f64) -> Result<Vec<f64>> {
    let at = |theta: f64| -> Vec<f64> {
        rho.iter()
            .zip(grad)
            .zip(metric)
            .map(|((r, g), d)| (r - alpha * (g - theta) / d).max(0.0))
            .collect()
    };
    let excess = |theta: f64| h * at(theta).iter().sum::<f64>() - mass;
    let gmin = grad.iter().cloned().fold(f64::INFINITY, f64::min);
    let gmax = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut lo = gmin - 1.0;
    let mut hi = gmax + 1.0;
    let mut width = (gmax - gmin).abs().max(1.0);
    while excess(lo) > 0.0 {
        lo -= width;
        width *= 2.0;
    }
    width = (gmax - gmin).abs().max(1.0);
    while excess(hi) < 0.0 {
        hi += width;
        width *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Bracket("mass projection".into()));
        }
    }
    let theta =
        brent(excess, lo, hi, 1e-15 * (hi.abs() + 1.0), 500).ok_or_else(|| Error::Bracket("mass projection".into()))?;
    let mut out = at(theta);
    let total = h * out.iter().sum::<f64>();
    out.iter_mut().for_each(|x| *x *= mass / total);
    Ok(out)
}

/// Multiplier estimate and the largest relative KKT violation:
/// `|V + F′ − μ|` on the support and `[μ − V − F′]₊` off it.
fn kkt_residual(rho: &[f64], v: &[f64], local: &dyn LocalEnergy) -> (f64, f64) {
    let max = rho.iter().cloned().fold(0.0, f64::max);
    let mut num = 0.0;
    let mut den = 0.0;
    for (r, vi) in rho.iter().zip(v) {
        num += r * (vi + local.eval(*r).1);
        den += r;
    }
    let mu = num / den;
    let mut worst: f64 = 0.0;
    for (r, vi) in rho.iter().zip(v) {
        let g = vi + local.eval(*r).1;
        let viol = if *r > 1e-12 * max {
            (g - mu).abs()
        } else {
            (mu - g).max(0.0)
        };
        worst = worst.max(viol);
    }
    (mu, worst / mu.abs().max(f64::MIN_POSITIVE))
}
