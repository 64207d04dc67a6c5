use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PARTICLES: usize = 64;

/// Ground state of `n` bosons on a ring of length `ell` with contact
/// coupling `g` (`H = −Σ∂² + gΣδ`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheState {
    pub n: usize,
    pub ell: f64,
    pub g: f64,
    pub quasimomenta: Vec<f64>,
    pub quantum_numbers: Vec<f64>,
    pub energy: f64,
    /// Largest absolute residual of the Bethe equations.
    pub residual: f64,
}

/// Ground-state quantum numbers `I_j = j − (n−1)/2`.
pub fn ground_quantum_numbers(n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64 - 0.5 * (n as f64 - 1.0)).collect()
}

struct Equations<'a> {
    ell: f64,
    c: f64,
    quantum: &'a [f64],
}

impl Equations<'_> {
    /// `ℓk_j + Σ_m 2 arctan((k_j − k_m)/c) − 2πI_j`.
    fn residual(&self, k: &[f64]) -> Vec<f64> {
        let n = k.len();
        (0..n)
            .map(|j| {
                let s: f64 = (0..n)
                    .filter(|&m| m != j)
                    .map(|m| 2.0 * ((k[j] - k[m]) / self.c).atan())
                    .sum();
                self.ell * k[j] + s - 2.0 * PI * self.quantum[j]
            })
            .collect()
    }

    /// Convex action whose gradient is [`Self::residual`].
    fn action(&self, k: &[f64]) -> f64 {
        let n = k.len();
        let c = self.c;
        let mut s = 0.0;
        for j in 0..n {
            s += 0.5 * self.ell * k[j] * k[j] - 2.0 * PI * self.quantum[j] * k[j];
            for m in j + 1..n {
                let x = k[j] - k[m];
                s += 2.0 * x * (x / c).atan() - c * (x * x / (c * c)).ln_1p();
            }
        }
        s
    }

    fn jacobian(&self, k: &[f64]) -> DMatrix<f64> {
        let n = k.len();
        let c = self.c;
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            jac[(j, j)] = self.ell;
            for m in 0..n {
                if m != j {
                    let x = k[j] - k[m];
                    let d = 2.0 * c / (c * c + x * x);
                    jac[(j, j)] += d;
                    jac[(j, m)] = -d;
                }
            }
        }
        jac
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

const RESIDUAL_TOL: f64 = 1e-11;

/// Damped Newton on the convex action from `start`.
fn newton(eq: &Equations, mut k: Vec<f64>, max_iter: usize) -> Option<(Vec<f64>, f64)> {
    let mut f = eq.residual(&k);
    let mut s = eq.action(&k);
    for _ in 0..max_iter {
        let res = max_abs(&f);
        if res < RESIDUAL_TOL {
            return Some((k, res));
        }
        let chol = eq.jacobian(&k).cholesky()?;
        let step = chol.solve(&DVector::from_vec(f.clone()));
        let slope: f64 = step.iter().zip(&f).map(|(a, b)| a * b).sum();
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = k.iter().zip(step.iter()).map(|(a, b)| a - t * b).collect();
            let st = eq.action(&trial);
            let armijo = st <= s - 1e-4 * t * slope;
            let flat = (st - s).abs() <= 1e-14 * s.abs().max(1.0);
            if armijo || flat {
                let ft = eq.residual(&trial);
                if armijo || max_abs(&ft) < res {
                    k = trial;
                    s = st;
                    f = ft;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-14 {
                return None;
            }
        }
    }
    let res = max_abs(&f);
    (res < RESIDUAL_TOL).then_some((k, res))
}

/// Solves the Bethe equations for the ground state by Newton's method on
/// the convex Yang–Yang action. If the direct solve stalls, the coupling
/// is continued downwards in `ln g` from the near-fermionized regime with
/// adaptive step halving.
pub fn bethe_ground_state(n: usize, ell: f64, g: f64) -> Result<BetheState> {
    if n == 0 || n > MAX_PARTICLES {
        return Err(Error::InvalidInput(format!(
            "particle count must be in 1..={MAX_PARTICLES}, got {n}"
        )));
    }
    if !(ell > 0.0 && g >= 0.0 && g.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need ell > 0 and finite g ≥ 0, got ell={ell}, g={g}"
        )));
    }
    let quantum = ground_quantum_numbers(n);
    if g == 0.0 || n == 1 {
        return Ok(BetheState {
            n,
            ell,
            g,
            quasimomenta: vec![0.0; n],
            quantum_numbers: quantum,
            energy: 0.0,
            residual: 0.0,
        });
    }
    let fermi: Vec<f64> = quantum.iter().map(|i| 2.0 * PI * i / ell).collect();
    let solve = |g: f64, start: Vec<f64>| {
        let eq = Equations {
            ell,
            c: 0.5 * g,
            quantum: &quantum,
        };
        newton(&eq, start, 200)
    };
    let start: Vec<f64> = fermi.iter().map(|k| k * g * ell / (g * ell + 2.0 * n as f64)).collect();
    let (k, residual) = match solve(g, start) {
        Some(sol) => sol,
        None => {
            let mut current_g = (1e4 * n as f64 / ell).max(g);
            let (mut k, _) = solve(current_g, fermi.clone()).ok_or(Error::NonConvergence {
                what: "Bethe equations",
                iterations: 200,
                residual: f64::NAN,
            })?;
            let mut step = 1.0f64;
            loop {
                let next = (current_g.ln() - step).exp().max(g);
                match solve(next, k.clone()) {
                    Some((kn, res)) => {
                        k = kn;
                        current_g = next;
                        if next == g {
                            break (k, res);
                        }
                        step = (step * 1.5).min(2.0);
                    }
                    None => {
                        step *= 0.5;
                        if step < 1e-6 {
                            return Err(Error::NonConvergence {
                                what: "Bethe continuation",
                                iterations: 0,
                                residual: f64::NAN,
                            });
                        }
                    }
                }
            }
        }
    };
    let energy = k.iter().map(|x| x * x).sum();
    Ok(BetheState {
        n,
        ell,
        g,
        quasimomenta: k,
        quantum_numbers: quantum,
        energy,
        residual,
    })
}

/// `e_n(t) = E ℓ²/n³` at `t = gℓ/n`, the finite-`n` approximant of `e(t)`.
pub fn finite_size_e(n: usize, t: f64) -> Result<f64> {
    let ell = n as f64;
    let st = bethe_ground_state(n, ell, t)?;
    Ok(st.energy * ell * ell / (n as f64).powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_coupling_pair() {
        let st = bethe_ground_state(2, 1.0, 0.01).unwrap();
        assert!((st.energy - 0.01).abs() < 0.02 * 0.01, "{}", st.energy);
        assert!(st.residual < 1e-10);
    }

    #[test]
    fn impenetrable_pair() {
        let st = bethe_ground_state(2, 1.0, 1e6).unwrap();
        assert!((st.energy / (2.0 * PI * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn free_gas() {
        let st = bethe_ground_state(5, 2.0, 0.0).unwrap();
        assert_eq!(st.energy, 0.0);
        assert!(st.quasimomenta.iter().all(|k| *k == 0.0));
    }

    #[test]
    fn roots_are_symmetric_and_bounded() {
        for &(n, g) in &[(8, 0.1), (16, 3.0), (64, 640.0), (64, 0.64)] {
            let st = bethe_ground_state(n, n as f64, g).unwrap();
            let k = &st.quasimomenta;
            for j in 0..n {
                assert!((k[j] + k[n - 1 - j]).abs() < 1e-9);
                if j > 0 {
                    assert!(k[j] > k[j - 1]);
                }
            }
            let tonks = PI * PI * (n * (n * n - 1)) as f64 / (3.0 * st.ell * st.ell);
            assert!(st.energy > 0.0 && st.energy < tonks);
        }
    }
}
