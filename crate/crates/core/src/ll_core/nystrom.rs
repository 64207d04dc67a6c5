//! Nyström solution of the Lieb–Liniger integral equation.
//!
//! In the canonical normalisation (`H = -Σ∂² + 2c Σδ`) the quasi-momentum
//! density on the Fermi interval rescaled to `[-1, 1]` obeys
//!
//! ```text
//! φ(x) - (1/2π) ∫ 2λ / (λ² + (x-y)²) φ(y) dy = 1/2π,
//! ```
//!
//! and the coupling and energy follow from its moments:
//! `γ = λ / m₀`, `e_LL(γ) = m₂ / m₀³`. The functional code uses
//! `H = -Σ∂² + g Σδ`, so `c = g/2` and `e(t) = e_LL(t/2)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::quadrature::composite_gauss_legendre;

/// Largest half-interval system the solver will assemble.
const MAX_UNKNOWNS: usize = 4096;

/// One point of the homogeneous energy curve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LLPoint {
    /// Coupling ratio `g/ρ`.
    pub t: f64,
    pub e: f64,
    pub e_prime: f64,
}

/// Moments of the quasi-momentum density at a fixed kernel parameter,
/// in canonical units.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelSolution {
    pub lambda: f64,
    pub gamma: f64,
    pub e: f64,
    pub de_dgamma: f64,
    pub dgamma_dlambda: f64,
}

fn panels_for(lambda: f64) -> usize {
    // singularities of the density sit a distance λ off the real axis;
    // panels of width 2λ keep the Bernstein ellipse ratio above 1 + √2
    (1.0 / (2.0 * lambda)).ceil().max(1.0) as usize
}

/// Solves the integral equation and its λ-derivative at kernel parameter
/// `lambda`, using `order` Gauss–Legendre nodes per panel on `[0, 1]`
/// (the density is even).
pub(crate) fn solve_kernel(lambda: f64, order: usize) -> Result<KernelSolution> {
    let panels = panels_for(lambda);
    let n = panels * order;
    if n > MAX_UNKNOWNS {
        return Err(Error::MemoryBudget {
            needed: n,
            cap: MAX_UNKNOWNS,
        });
    }
    let (y, w) = composite_gauss_legendre(0.0, 1.0, panels, order);
    let l2 = lambda * lambda;
    let kern = |u: f64| 2.0 * lambda / (l2 + u * u);
    let dkern = |u: f64| {
        let d = l2 + u * u;
        2.0 * (u * u - l2) / (d * d)
    };
    let inv2pi = 0.5 / PI;
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut da = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let (dm, dp) = (y[i] - y[j], y[i] + y[j]);
            a[(i, j)] -= inv2pi * w[j] * (kern(dm) + kern(dp));
            da[(i, j)] = inv2pi * w[j] * (dkern(dm) + dkern(dp));
        }
    }
    let lu = a.lu();
    let rhs = DVector::from_element(n, inv2pi);
    let phi = lu.solve(&rhs).ok_or(Error::NonConvergence {
        what: "Lieb-Liniger Nyström system",
        iterations: 0,
        residual: f64::NAN,
    })?;
    let dphi = lu.solve(&(&da * &phi)).ok_or(Error::NonConvergence {
        what: "Lieb-Liniger Nyström derivative system",
        iterations: 0,
        residual: f64::NAN,
    })?;

    let (mut m0, mut m2, mut dm0, mut dm2) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        m0 += 2.0 * w[i] * phi[i];
        m2 += 2.0 * w[i] * y[i] * y[i] * phi[i];
        dm0 += 2.0 * w[i] * dphi[i];
        dm2 += 2.0 * w[i] * y[i] * y[i] * dphi[i];
    }
    let gamma = lambda / m0;
    let e = m2 / (m0 * m0 * m0);
    let dgamma = (m0 - lambda * dm0) / (m0 * m0);
    let de = (dm2 * m0 - 3.0 * m2 * dm0) / m0.powi(4);
    Ok(KernelSolution {
        lambda,
        gamma,
        e,
        de_dgamma: de / dgamma,
        dgamma_dlambda: dgamma,
    })
}

/// Rough kernel parameter for a canonical coupling, from the weak
/// (`λ ≈ √γ/2`) and strong (`γ ≈ πλ - 2`) asymptotics.
fn lambda_guess(gamma: f64) -> f64 {
    (0.5 * gamma.sqrt()).max((gamma + 2.0) / PI)
}

/// Inverts `λ ↦ γ(λ)` by safeguarded Newton iteration in `ln λ`, starting
/// from `start` (continuation from a neighbouring solution) when given.
pub(crate) fn solve_for_gamma(gamma: f64, order: usize, start: Option<f64>) -> Result<KernelSolution> {
    let target = gamma.ln();
    let mut x = start.unwrap_or_else(|| lambda_guess(gamma)).ln();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut last = f64::NAN;
    for it in 0..80 {
        let sol = solve_kernel(x.exp(), order)?;
        let f = sol.gamma.ln() - target;
        last = f;
        if f.abs() < 1e-14 {
            return Ok(sol);
        }
        if f < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let slope = sol.lambda * sol.dgamma_dlambda / sol.gamma;
        let mut next = x - f / slope;
        let bracketed = lo.is_finite() && hi.is_finite();
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if bracketed {
                0.5 * (lo + hi)
            } else if f < 0.0 {
                x + 1.0
            } else {
                x - 1.0
            };
        }
        if bracketed && (hi - lo) < 1e-15 && it > 5 {
            return Ok(sol);
        }
        x = next;
    }
    Err(Error::NonConvergence {
        what: "Lieb-Liniger coupling inversion",
        iterations: 80,
        residual: last,
    })
}

/// Energy coefficient `e(t)` and its derivative at coupling ratio `t = g/ρ`
/// from the integral equation, with `quad_order` Gauss–Legendre nodes per
/// panel (panel count adapts to the kernel width).
pub fn solve_ll_point(t: f64, quad_order: usize) -> Result<LLPoint> {
    solve_ll_point_from(t, quad_order, None).map(|(p, _)| p)
}

pub(crate) fn solve_ll_point_from(t: f64, quad_order: usize, lambda_start: Option<f64>) -> Result<(LLPoint, f64)> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!(
            "coupling ratio must be finite and nonnegative, got {t}"
        )));
    }
    if quad_order < 16 {
        return Err(Error::InvalidInput(format!(
            "quad_order must be at least 16, got {quad_order}"
        )));
    }
    if t == 0.0 {
        return Ok((
            LLPoint {
                t,
                e: 0.0,
                e_prime: 0.5,
            },
            0.0,
        ));
    }
    let sol = solve_for_gamma(0.5 * t, quad_order, lambda_start)?;
    Ok((
        LLPoint {
            t,
            e: sol.e,
            e_prime: 0.5 * sol.de_dgamma,
        },
        sol.lambda,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_gas_limit() {
        let p = solve_ll_point(0.0, 16).unwrap();
        assert_eq!((p.e, p.e_prime), (0.0, 0.5));
    }

    #[test]
    fn rejects_negative_and_low_order() {
        assert!(solve_ll_point(-1.0, 32).is_err());
        assert!(solve_ll_point(1.0, 8).is_err());
    }

    #[test]
    fn strong_coupling_approaches_fermions() {
        let p = solve_ll_point(1e6, 32).unwrap();
        let ft = PI * PI / 3.0;
        assert!(p.e < ft && p.e > 0.995 * ft, "{}", p.e);
    }

    #[test]
    fn derivative_matches_centered_difference() {
        for t in [0.05, 1.0, 30.0] {
            let p = solve_ll_point(t, 32).unwrap();
            let h = 1e-5 * t;
            let fd = (solve_ll_point(t + h, 32).unwrap().e - solve_ll_point(t - h, 32).unwrap().e) / (2.0 * h);
            assert!(
                (p.e_prime - fd).abs() < 1e-6 * p.e_prime.abs().max(1e-3),
                "t={t}: {} vs {fd}",
                p.e_prime
            );
        }
    }
}
