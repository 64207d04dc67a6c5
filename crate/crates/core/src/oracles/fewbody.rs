use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};
use rustdct::num_complex::Complex;
use rustdct::rustfft::{Fft, FftPlanner};
use rustdct::{DctPlanner, Dst1, TransformType2And3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::richardson;

/// Boundary condition on the interval `[0, ℓ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
    Periodic,
}

/// Default peak-memory budget for one few-body solve.
pub const DEFAULT_MEMORY_CAP: usize = 2 << 30;

/// Three-body solves hold this so their peak memory never stacks up.
static THREE_BODY: Mutex<()> = Mutex::new(());

/// Vectors of the full grid held at once by the eigensolver.
const WORKING_VECTORS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FewBodyEnergy {
    /// Extrapolated to zero spacing from the two meshes.
    pub energy: f64,
    pub coarse: f64,
    pub fine: f64,
    pub cells: usize,
}

enum Transform {
    Cosine(Arc<dyn TransformType2And3<f64>>),
    Sine(Arc<dyn Dst1<f64>>),
    Fourier(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>),
}

/// `n` particles on a grid with `m` points per axis and spacing `h`.
/// Neumann uses cell centers, Dirichlet interior nodes, periodic all nodes
/// of the ring; a pair on the same point costs `g/h`.
struct FewBodyOperator {
    n: usize,
    m: usize,
    h: f64,
    g: f64,
    bc: BoundaryCondition,
    eig1d: Vec<f64>,
    transform: Transform,
    shift: f64,
}

impl FewBodyOperator {
    fn new(n: usize, ell: f64, g: f64, bc: BoundaryCondition, cells: usize) -> Self {
        let h = ell / cells as f64;
        let ih2 = 1.0 / (h * h);
        let m = match bc {
            BoundaryCondition::Dirichlet => cells - 1,
            _ => cells,
        };
        let eig1d: Vec<f64> = (0..m)
            .map(|k| {
                let theta = match bc {
                    BoundaryCondition::Neumann => PI * k as f64 / cells as f64,
                    BoundaryCondition::Dirichlet => PI * (k + 1) as f64 / cells as f64,
                    BoundaryCondition::Periodic => 2.0 * PI * k as f64 / cells as f64,
                };
                (2.0 - 2.0 * theta.cos()) * ih2
            })
            .collect();
        let transform = match bc {
            BoundaryCondition::Neumann => Transform::Cosine(DctPlanner::new().plan_dct2(m)),
            BoundaryCondition::Dirichlet => Transform::Sine(DctPlanner::new().plan_dst1(m)),
            BoundaryCondition::Periodic => {
                let mut p = FftPlanner::new();
                Transform::Fourier(p.plan_fft_forward(m), p.plan_fft_inverse(m))
            }
        };
        Self {
            n,
            m,
            h,
            g,
            bc,
            eig1d,
            transform,
            shift: PI * PI / (ell * ell),
        }
    }

    fn len(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    fn strides(&self) -> Vec<usize> {
        (0..self.n).map(|a| self.m.pow((self.n - 1 - a) as u32)).collect()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let m = self.m;
        let ih2 = 1.0 / (self.h * self.h);
        let contact = self.g / self.h;
        let strides = self.strides();
        let mut idx = vec![0usize; self.n];
        for (flat, out) in y.iter_mut().enumerate() {
            let mut rem = flat;
            for a in 0..self.n {
                idx[a] = rem / strides[a];
                rem %= strides[a];
            }
            let xc = x[flat];
            let mut acc = 0.0;
            for a in 0..self.n {
                let i = idx[a];
                let s = strides[a];
                let left = if i > 0 {
                    Some(x[flat - s])
                } else {
                    match self.bc {
                        BoundaryCondition::Periodic => Some(x[flat + (m - 1) * s]),
                        BoundaryCondition::Dirichlet => Some(0.0),
                        BoundaryCondition::Neumann => None,
                    }
                };
                let right = if i + 1 < m {
                    Some(x[flat + s])
                } else {
                    match self.bc {
                        BoundaryCondition::Periodic => Some(x[flat - (m - 1) * s]),
                        BoundaryCondition::Dirichlet => Some(0.0),
                        BoundaryCondition::Neumann => None,
                    }
                };
                for nb in [left, right].into_iter().flatten() {
                    acc += xc - nb;
                }
            }
            let mut pairs = 0usize;
            for a in 0..self.n {
                for b in a + 1..self.n {
                    if idx[a] == idx[b] {
                        pairs += 1;
                    }
                }
            }
            *out = acc * ih2 + contact * pairs as f64 * xc;
        }
    }

    /// Applies `f` to every lane along `axis`.
    fn for_each_lane<T: Copy + Default>(&self, data: &mut [T], axis: usize, mut f: impl FnMut(&mut [T])) {
        let m = self.m;
        let stride = self.strides()[axis];
        let block = stride * m;
        let mut lane = vec![T::default(); m];
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for i in 0..m {
                    lane[i] = data[base + i * stride];
                }
                f(&mut lane);
                for i in 0..m {
                    data[base + i * stride] = lane[i];
                }
            }
        }
    }

    fn spectral_divide<T>(&self, data: &mut [T], div: impl Fn(&mut T, f64)) {
        let strides = self.strides();
        for (flat, v) in data.iter_mut().enumerate() {
            let mut rem = flat;
            let mut lam = self.shift;
            for s in &strides {
                lam += self.eig1d[rem / s];
                rem %= s;
            }
            div(v, lam);
        }
    }

    /// `(−Δ_h + shift)⁻¹ r` by diagonalizing each axis.
    fn precondition(&self, r: &[f64]) -> Vec<f64> {
        match &self.transform {
            Transform::Cosine(t) => {
                let mut d = r.to_vec();
                for a in 0..self.n {
                    self.for_each_lane(&mut d, a, |l| t.process_dct2(l));
                }
                self.spectral_divide(&mut d, |v, lam| *v /= lam);
                for a in 0..self.n {
                    self.for_each_lane(&mut d, a, |l| t.process_dct3(l));
                }
                d
            }
            Transform::Sine(t) => {
                let mut d = r.to_vec();
                for a in 0..self.n {
                    self.for_each_lane(&mut d, a, |l| t.process_dst1(l));
                }
                self.spectral_divide(&mut d, |v, lam| *v /= lam);
                for a in 0..self.n {
                    self.for_each_lane(&mut d, a, |l| t.process_dst1(l));
                }
                d
            }
            Transform::Fourier(fwd, inv) => {
                let mut d: Vec<Complex<f64>> = r.iter().map(|&x| Complex::new(x, 0.0)).collect();
                for a in 0..self.n {
                    self.for_each_lane(&mut d, a, |l| fwd.process(l));
                }
                self.spectral_divide(&mut d, |v, lam| *v /= lam);
                for a in 0..self.n {
                    self.for_each_lane(&mut d, a, |l| inv.process(l));
                }
                d.iter().map(|c| c.re).collect()
            }
        }
    }

    fn initial(&self) -> Vec<f64> {
        let strides = self.strides();
        (0..self.len())
            .map(|flat| {
                let mut rem = flat;
                let mut v = 1.0;
                for s in &strides {
                    let i = rem / s;
                    rem %= s;
                    if self.bc == BoundaryCondition::Dirichlet {
                        v *= (PI * (i + 1) as f64 / (self.m + 1) as f64).sin();
                    }
                }
                v
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(a, b)| *a += alpha * b);
}

/// Lowest eigenvalue by single-vector LOBPCG with the spectral
/// preconditioner.
fn lowest_eigenvalue(op: &FewBodyOperator, tol: f64, max_iter: usize) -> Result<f64> {
    let len = op.len();
    let mut x = op.initial();
    let nx = dot(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= nx);
    let mut ax = vec![0.0; len];
    op.apply(&x, &mut ax);
    let mut lambda = dot(&x, &ax);
    let mut p: Option<(Vec<f64>, Vec<f64>)> = None;
    let scale = op.shift;
    let mut res_norm = f64::INFINITY;
    for it in 0..max_iter {
        let r: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a - lambda * b).collect();
        res_norm = dot(&r, &r).sqrt();
        if res_norm <= tol * lambda.abs().max(scale) {
            return Ok(lambda);
        }
        let w = op.precondition(&r);
        let mut aw = vec![0.0; len];
        op.apply(&w, &mut aw);

        let mut basis: Vec<(Vec<f64>, Vec<f64>)> = vec![(x.clone(), ax.clone()), (w, aw)];
        if let Some(pp) = p.take() {
            basis.push(pp);
        }
        // modified Gram–Schmidt, twice, carrying the operator images along
        let mut kept: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(3);
        for (mut v, mut av) in basis {
            let n0 = dot(&v, &v).sqrt();
            for _ in 0..2 {
                for (u, au) in &kept {
                    let c = dot(u, &v);
                    axpy(-c, u, &mut v);
                    axpy(-c, au, &mut av);
                }
            }
            let nv = dot(&v, &v).sqrt();
            if nv > 1e-10 * n0 && nv > 0.0 {
                v.iter_mut().for_each(|t| *t /= nv);
                av.iter_mut().for_each(|t| *t /= nv);
                kept.push((v, av));
            }
        }
        let k = kept.len();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            0.5 * (dot(&kept[i].0, &kept[j].1) + dot(&kept[j].0, &kept[i].1))
        });
        let eig = SymmetricEigen::new(gram);
        let imin = (0..k)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .unwrap();
        let c: Vec<f64> = (0..k).map(|i| eig.eigenvectors[(i, imin)]).collect();

        let mut xn = vec![0.0; len];
        let mut axn = vec![0.0; len];
        let mut pn = vec![0.0; len];
        let mut apn = vec![0.0; len];
        for (i, (v, av)) in kept.iter().enumerate() {
            axpy(c[i], v, &mut xn);
            axpy(c[i], av, &mut axn);
            if i > 0 {
                axpy(c[i], v, &mut pn);
                axpy(c[i], av, &mut apn);
            }
        }
        let nx = dot(&xn, &xn).sqrt();
        xn.iter_mut().for_each(|t| *t /= nx);
        axn.iter_mut().for_each(|t| *t /= nx);
        x = xn;
        ax = axn;
        if (it + 1) % 25 == 0 {
            op.apply(&x, &mut ax);
        }
        lambda = dot(&x, &ax);
        p = Some((pn, apn));
    }
    Err(Error::NonConvergence {
        what: "few-body eigensolver",
        iterations: max_iter,
        residual: res_norm,
    })
}

/// Ground-state energy of `n ∈ {2, 3}` bosons on `[0, ℓ]` with contact
/// coupling `g` and boundary condition `bc`, on meshes of `cells` and
/// `2·cells` cells, Richardson-extrapolated assuming second-order error.
///
/// The full product space is used: its ground state is symmetric, hence
/// bosonic.
pub fn grid_fewbody_energy(
    n: usize,
    ell: f64,
    g: f64,
    bc: BoundaryCondition,
    cells: usize,
    memory_cap: usize,
) -> Result<FewBodyEnergy> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "grid oracle supports 2 or 3 particles, got {n}"
        )));
    }
    if !(ell > 0.0 && g >= 0.0 && g.is_finite()) || cells < 8 {
        return Err(Error::InvalidInput(format!(
            "need ell > 0, g ≥ 0, cells ≥ 8; got {ell}, {g}, {cells}"
        )));
    }
    let needed = (2 * cells).pow(n as u32) * 8 * WORKING_VECTORS;
    if needed > memory_cap {
        return Err(Error::MemoryBudget {
            needed,
            cap: memory_cap,
        });
    }
    let _guard = (n == 3).then(|| THREE_BODY.lock().unwrap_or_else(|e| e.into_inner()));
    let coarse = grid_level(n, ell, g, bc, cells)?;
    let fine = grid_level(n, ell, g, bc, 2 * cells)?;
    Ok(FewBodyEnergy {
        energy: richardson(coarse, fine, 2),
        coarse,
        fine,
        cells,
    })
}

/// Lowest eigenvalue on a single mesh of `cells` cells.
pub fn grid_level(n: usize, ell: f64, g: f64, bc: BoundaryCondition, cells: usize) -> Result<f64> {
    let op = FewBodyOperator::new(n, ell, g, bc, cells);
    lowest_eigenvalue(&op, 1e-9, 5000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_dirichlet_pair() {
        let e = grid_fewbody_energy(2, 1.0, 0.0, BoundaryCondition::Dirichlet, 32, DEFAULT_MEMORY_CAP).unwrap();
        assert!((e.energy / (2.0 * PI * PI) - 1.0).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn free_neumann_pair() {
        let e = grid_fewbody_energy(2, 1.0, 0.0, BoundaryCondition::Neumann, 32, DEFAULT_MEMORY_CAP).unwrap();
        assert!(e.energy.abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn preconditioner_inverts_free_operator() {
        for bc in [
            BoundaryCondition::Neumann,
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Periodic,
        ] {
            let op = FewBodyOperator::new(2, 1.0, 0.0, bc, 12);
            let x: Vec<f64> = (0..op.len()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
            let mut y = vec![0.0; op.len()];
            op.apply(&x, &mut y);
            axpy(op.shift, &x, &mut y);
            let back = op.precondition(&y);
            let ratio = dot(&back, &x) / dot(&x, &x);
            // the transforms are unnormalized; only proportionality matters
            for (b, xi) in back.iter().zip(&x) {
                assert!((b - ratio * xi).abs() < 1e-9 * ratio.abs() * 10.0, "{bc:?}");
            }
        }
    }

    #[test]
    fn memory_budget_is_enforced() {
        let r = grid_fewbody_energy(3, 1.0, 1.0, BoundaryCondition::Periodic, 512, 1 << 20);
        assert!(matches!(r, Err(Error::MemoryBudget { .. })));
    }
}
