//! Preconditioned descent on the sphere `weight·|x|² = mass`.

use crate::error::{Error, Result};

pub(crate) trait SphereProblem {
    /// Inner-product weight; the constraint is `weight·|x|² = mass`.
    fn weight(&self) -> f64;
    fn energy(&self, x: &[f64]) -> f64;
    /// `Hx` with `∇E = 2·weight·Hx`.
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    /// Solves `(J − μ + σ) d = r` for an SPD approximation `J` of the
    /// Hessian at `x`; `None` when the shifted matrix is not positive definite.
    fn precondition(&self, x: &[f64], mu: f64, sigma: f64, r: &[f64]) -> Option<Vec<f64>>;
}

pub(crate) struct DescentResult {
    pub x: Vec<f64>,
    pub energy: f64,
    pub mu: f64,
    pub iterations: usize,
    pub residual: f64,
    pub trace: Vec<f64>,
}

struct Residual {
    mu: f64,
    r: Vec<f64>,
    rel: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual<P: SphereProblem + ?Sized>(p: &P, x: &[f64]) -> Residual {
    let hx = p.apply(x);
    let nn = dot(x, x);
    let mu = dot(x, &hx) / nn;
    let r: Vec<f64> = hx.iter().zip(x).map(|(a, b)| a - mu * b).collect();
    let rel = (dot(&r, &r) / nn).sqrt() / mu.abs().max(f64::MIN_POSITIVE);
    Residual { mu, r, rel }
}

fn normalize(x: &mut [f64], weight: f64, mass: f64) -> bool {
    let m = weight * dot(x, x);
    if !(m > 0.0 && m.is_finite()) {
        return false;
    }
    let f = (mass / m).sqrt();
    x.iter_mut().for_each(|v| *v *= f);
    true
}

/// Minimizes `E` on the sphere until `‖Hx − μx‖ / (|μ|‖x‖) ≤ tol`.
///
/// Directions are preconditioned residuals projected tangent to the sphere;
/// steps are renormalized and backtracked (Armijo) so accepted energies never
/// increase. Near convergence a step that leaves the energy unchanged to
/// roundoff is accepted if it lowers the residual.
pub(crate) fn descend<P: SphereProblem + ?Sized>(
    p: &P,
    mut x: Vec<f64>,
    mass: f64,
    tol: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<DescentResult> {
    let w = p.weight();
    if !normalize(&mut x, w, mass) {
        return Err(Error::InvalidInput("initial guess has no mass".into()));
    }
    let mut energy = p.energy(&x);
    let mut trace = vec![energy];
    let mut res = residual(p, &x);
    let scale = res.mu.abs().max(1e-300);
    let mut sigma = 0.1 * scale;
    let mut alpha: f64 = 1.0;
    let mut iterations = 0;

    while res.rel > tol {
        if iterations >= max_iter {
            return Err(Error::NonConvergence {
                what,
                iterations,
                residual: res.rel,
            });
        }
        iterations += 1;
        if sigma > 1e12 * scale {
            return Err(Error::NonConvergence {
                what,
                iterations,
                residual: res.rel,
            });
        }

        let Some(mut d) = p.precondition(&x, res.mu, sigma, &res.r) else {
            sigma = 4.0 * sigma + 1e-12 * scale;
            continue;
        };
        let c = dot(&d, &x) / dot(&x, &x);
        d.iter_mut().zip(&x).for_each(|(v, xi)| *v -= c * xi);
        let slope = dot(&res.r, &d);
        if !(slope > 0.0) {
            sigma = 4.0 * sigma + 1e-12 * scale;
            continue;
        }

        alpha = (2.0 * alpha).min(1.0);
        let mut accepted = None;
        while alpha > 1e-12 {
            let mut trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a - alpha * b).collect();
            if normalize(&mut trial, w, mass) {
                let e = p.energy(&trial);
                if e <= energy - 1e-4 * alpha * 2.0 * w * slope {
                    accepted = Some((trial, e, None));
                    break;
                }
                if (e - energy).abs() <= 1e-13 * energy.abs() {
                    let tr = residual(p, &trial);
                    if tr.rel < res.rel {
                        accepted = Some((trial, e, Some(tr)));
                        break;
                    }
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((trial, e, tr)) => {
                x = trial;
                energy = e;
                trace.push(e);
                res = tr.unwrap_or_else(|| residual(p, &x));
                if alpha >= 1.0 {
                    sigma = (0.5 * sigma).max(1e-8 * scale);
                } else if alpha < 0.25 {
                    sigma *= 2.0;
                }
            }
            None => {
                sigma = 4.0 * sigma + 1e-12 * scale;
                alpha = 1.0;
            }
        }
    }
    Ok(DescentResult {
        x,
        energy,
        mu: res.mu,
        iterations,
        residual: res.rel,
        trace,
    })
}
