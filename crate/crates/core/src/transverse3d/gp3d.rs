use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::modes::{radial_operator, RadialGrid, TransverseKind, TransverseMode};
use crate::error::{Error, Result};
use crate::functional::{minimize_functional, Grid1D, MeanField, MinimizeOptions, TrapSpec};
use crate::numerics::descent::{descend, SphereProblem};
use crate::numerics::tridiag::SymTridiag;

/// Discretization of the reduced 3D problem. The radial grid is in units
/// of `r`, the longitudinal grid in units of `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gp3dGrids {
    pub radial: RadialGrid,
    pub z: Grid1D,
    /// Number of transverse eigenmodes kept.
    pub modes: usize,
}

impl Gp3dGrids {
    pub fn new(radial: RadialGrid, z: Grid1D, modes: usize) -> Result<Self> {
        if modes == 0 || modes > radial.n_cells {
            return Err(Error::InvalidInput(format!("mode count {modes} out of range")));
        }
        if radial.spacing() > 1.0 / 8.0 {
            return Err(Error::UnderResolved(format!(
                "transverse spacing {} exceeds r/8",
                radial.spacing()
            )));
        }
        Ok(Self { radial, z, modes })
    }

    /// Radius 6 with 96 cells, 12 modes, and a longitudinal grid of
    /// half-width `z_half` with `n_z` points.
    pub fn standard(z_half: f64, n_z: usize) -> Result<Self> {
        Self::new(RadialGrid::new(6.0, 96)?, Grid1D::symmetric(z_half, n_z)?, 12)
    }
}

/// Radially symmetric `Φ(ρ⊥, z)` sampled at radial cell centers and
/// longitudinal nodes, stored radius-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field2D {
    pub radial: Vec<f64>,
    pub radial_spacing: f64,
    pub z: Vec<f64>,
    pub values: Vec<f64>,
}

impl Field2D {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.z.len() + j]
    }

    /// `∫|Φ|² 2πρ⊥ dρ⊥ dz`.
    pub fn mass(&self) -> f64 {
        let hz = self.z[1] - self.z[0];
        let nz = self.z.len();
        let mut total = 0.0;
        for (i, rho) in self.radial.iter().enumerate() {
            let w = 2.0 * PI * rho * self.radial_spacing;
            total += w * hz * self.values[i * nz..(i + 1) * nz].iter().map(|v| v * v).sum::<f64>();
        }
        total
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "rho_perp,z,phi")?;
        for (i, rho) in self.radial.iter().enumerate() {
            for (j, z) in self.z.iter().enumerate() {
                writeln!(w, "{rho:.10e},{z:.10e},{:.10e}", self.value(i, j))?;
            }
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gp3dResult {
    /// `E^GP_3D(N, L, r, a)`.
    pub energy: f64,
    /// `E^GP_3D(1, 1, r/L, Na/L)`.
    pub reduced_energy: f64,
    /// Discrete transverse ground energy on the radial grid, unit `r`.
    pub e_perp_grid: f64,
    pub mu: f64,
    pub iterations: usize,
    pub residual: f64,
    pub field: Field2D,
}

/// Reduced problem for `N = 1`, `L = 1` in the variable `u(x, z) = rΦ(rx, z)`
/// expanded in transverse eigenmodes: unknowns `C[k·nz + j]`.
struct Gp3dProblem {
    nz: usize,
    hz: f64,
    v: Vec<f64>,
    lambda: Vec<f64>,
    /// `χ_k(i)` stored mode-major.
    chi: Vec<f64>,
    w: Vec<f64>,
    nr: usize,
    coupling: f64,
    inv_r2: f64,
}

impl Gp3dProblem {
    fn modes(&self) -> usize {
        self.lambda.len()
    }

    fn real_space(&self, c: &[f64]) -> Vec<f64> {
        let nz = self.nz;
        let mut u = vec![0.0; self.nr * nz];
        for k in 0..self.modes() {
            let ck = &c[k * nz..(k + 1) * nz];
            for i in 0..self.nr {
                let x = self.chi[k * self.nr + i];
                let row = &mut u[i * nz..(i + 1) * nz];
                row.iter_mut().zip(ck).for_each(|(a, b)| *a += x * b);
            }
        }
        u
    }
}

impl SphereProblem for Gp3dProblem {
    fn weight(&self) -> f64 {
        self.hz
    }

    fn energy(&self, c: &[f64]) -> f64 {
        let nz = self.nz;
        let mut linear = 0.0;
        let mut kinetic = 0.0;
        for k in 0..self.modes() {
            let ck = &c[k * nz..(k + 1) * nz];
            let t = self.lambda[k] * self.inv_r2;
            linear += ck.iter().zip(&self.v).map(|(x, v)| (t + v) * x * x).sum::<f64>();
            kinetic += ck[0] * ck[0] + ck[nz - 1] * ck[nz - 1];
            kinetic += ck.windows(2).map(|p| (p[1] - p[0]).powi(2)).sum::<f64>();
        }
        let u = self.real_space(c);
        let mut quartic = 0.0;
        for i in 0..self.nr {
            quartic += self.w[i] * u[i * nz..(i + 1) * nz].iter().map(|x| x.powi(4)).sum::<f64>();
        }
        self.hz * linear + kinetic / self.hz + 0.5 * self.coupling * self.hz * quartic
    }

    fn apply(&self, c: &[f64]) -> Vec<f64> {
        let nz = self.nz;
        let ih2 = 1.0 / (self.hz * self.hz);
        let u = self.real_space(c);
        let mut out = vec![0.0; c.len()];
        for k in 0..self.modes() {
            let ck = &c[k * nz..(k + 1) * nz];
            let t = self.lambda[k] * self.inv_r2;
            let ok = &mut out[k * nz..(k + 1) * nz];
            for j in 0..nz {
                let left = if j > 0 { ck[j - 1] } else { 0.0 };
                let right = if j + 1 < nz { ck[j + 1] } else { 0.0 };
                ok[j] = (2.0 * ck[j] - left - right) * ih2 + (t + self.v[j]) * ck[j];
            }
            for i in 0..self.nr {
                let f = self.coupling * self.w[i] * self.chi[k * self.nr + i];
                let ui = &u[i * nz..(i + 1) * nz];
                ok.iter_mut().zip(ui).for_each(|(o, x)| *o += f * x * x * x);
            }
        }
        out
    }

    fn precondition(&self, c: &[f64], mu: f64, sigma: f64, r: &[f64]) -> Option<Vec<f64>> {
        let nz = self.nz;
        let ih2 = 1.0 / (self.hz * self.hz);
        let u = self.real_space(c);
        let mut nl = vec![0.0; nz];
        for i in 0..self.nr {
            let f = 3.0 * self.coupling * self.w[i] * self.chi[i].powi(2);
            nl.iter_mut()
                .zip(&u[i * nz..(i + 1) * nz])
                .for_each(|(a, x)| *a += f * x * x);
        }
        let mut out = Vec::with_capacity(c.len());
        for k in 0..self.modes() {
            let t = self.lambda[k] * self.inv_r2;
            let diag = (0..nz).map(|j| 2.0 * ih2 + self.v[j] + t + nl[j] + sigma).collect();
            let d = SymTridiag::new(diag, vec![-ih2; nz - 1]).solve_spd_shifted(mu, &r[k * nz..(k + 1) * nz])?;
            out.extend(d);
        }
        Some(out)
    }
}

/// Minimizes the 3D GP functional with harmonic transverse confinement
/// `V⊥(x/r)/r²`, longitudinal trap `trap`, over radially symmetric `Φ`
/// with `∫|Φ|² = N`, via the reduction
/// `E(N, L, r, a) = (N/L²) E(1, 1, r/L, Na/L)`.
pub fn minimize_gp_3d(n: f64, trap: &TrapSpec, r: f64, a: f64, grids: &Gp3dGrids, tol: f64) -> Result<Gp3dResult> {
    if !(n > 0.0 && r > 0.0 && a >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "need N > 0, r > 0, a ≥ 0; got N={n}, r={r}, a={a}"
        )));
    }
    let l = trap.length;
    let unit_trap = TrapSpec::new(trap.s, 1.0);
    let mut out = minimize_gp_3d_unit(&unit_trap, r / l, n * a / l, grids, tol, None)?;
    out.energy = n / (l * l) * out.reduced_energy;
    let amp = n.sqrt() / l.powf(1.5);
    out.field.radial.iter_mut().for_each(|x| *x *= l);
    out.field.radial_spacing *= l;
    out.field.z.iter_mut().for_each(|x| *x *= l);
    out.field.values.iter_mut().for_each(|x| *x *= amp);
    Ok(out)
}

/// `N = 1`, `L = 1` solve. `init` is an optional longitudinal density on
/// `grids.z` used for the lowest transverse mode.
pub fn minimize_gp_3d_unit(
    trap: &TrapSpec,
    r: f64,
    a: f64,
    grids: &Gp3dGrids,
    tol: f64,
    init: Option<&[f64]>,
) -> Result<Gp3dResult> {
    crate::functional::check_trap_grid(trap, &grids.z)?;
    let radial = grids.radial;
    let nr = radial.n_cells;
    let (lambda, chi) = harmonic_basis(&radial, grids.modes);
    let w = radial.weights();
    let zs = grids.z.points();
    let nzf = zs.len();
    let nz = nzf - 2;
    let v: Vec<f64> = zs[1..nzf - 1]
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
    let problem = Gp3dProblem {
        nz,
        hz: grids.z.spacing(),
        v,
        lambda,
        chi,
        w,
        nr,
        coupling: 8.0 * PI * a / (r * r),
        inv_r2: 1.0 / (r * r),
    };
    let mut start = vec![0.0; grids.modes * nz];
    match init {
        Some(rho) if rho.len() == nzf => {
            for j in 0..nz {
                start[j] = rho[j + 1].max(0.0).sqrt();
            }
        }
        Some(rho) => {
            return Err(Error::InvalidInput(format!(
                "initial density has {} samples, grid has {nzf}",
                rho.len()
            )));
        }
        None => {
            let width = (grids.z.z_max - grids.z.z_min) / 12.0;
            for j in 0..nz {
                start[j] = (-0.5 * (zs[j + 1] / width).powi(2)).exp();
            }
        }
    }
    let res = descend(&problem, start, 1.0, tol, 100_000, "3D GP minimizer")?;

    let u = problem.real_space(&res.x);
    let mut values = vec![0.0; nr * nzf];
    for i in 0..nr {
        for j in 0..nz {
            values[i * nzf + j + 1] = u[i * nz + j] / r;
        }
    }
    let field = Field2D {
        radial: radial.radii().iter().map(|x| x * r).collect(),
        radial_spacing: radial.spacing() * r,
        z: zs,
        values,
    };
    Ok(Gp3dResult {
        energy: res.energy,
        reduced_energy: res.energy,
        e_perp_grid: problem.lambda[0],
        mu: res.mu,
        iterations: res.iterations,
        residual: res.residual,
        field,
    })
}

/// Lowest `modes` radial eigenvalues of the harmonic transverse operator and
/// their eigenvectors, orthonormal under the area weights, mode-major.
fn harmonic_basis(radial: &RadialGrid, modes: usize) -> (Vec<f64>, Vec<f64>) {
    let op = radial_operator(TransverseKind::Harmonic, radial, 0);
    let w = radial.weights();
    let mut lambda = Vec::with_capacity(modes);
    let mut chi = Vec::with_capacity(modes * radial.n_cells);
    for k in 0..modes {
        let lk = op.eigenvalue(k);
        let q = op.eigenvector(lk);
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        chi.extend(q.iter().zip(&w).map(|(x, wi)| x / (norm * wi.sqrt())));
        lambda.push(lk);
    }
    (lambda, chi)
}

/// One point of the 3D → 1D comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverPoint {
    pub r: f64,
    pub a: f64,
    pub g: f64,
    /// Coupling from the transverse mode of the radial grid, used for `e_1d`.
    pub g_grid: f64,
    pub ratio: f64,
    pub e_3d: f64,
    pub e_1d: f64,
    /// Discrete `e⊥/r²` subtracted from `e_3d`.
    pub transverse_offset: f64,
}

/// `(E^GP_3D(1,1,r,a) − e⊥/r²) / E^GP(1,1,g)` with harmonic transverse
/// confinement. Both functionals share the longitudinal grid, and `e⊥` and
/// `∫b⁴` in the ratio are those of the radial grid, so the product trial
/// state lies in the discrete space and the ratio cannot exceed 1.
pub fn crossover_ratio(trap: &TrapSpec, r: f64, a: f64, grids: &Gp3dGrids, tol: f64) -> Result<CrossoverPoint> {
    let unit_trap = TrapSpec::new(trap.s, 1.0);
    let g = super::modes::effective_g(a, r, TransverseMode::standard(TransverseKind::Harmonic));
    let (_, chi) = harmonic_basis(&grids.radial, 1);
    let b4: f64 = grids
        .radial
        .weights()
        .iter()
        .zip(&chi)
        .map(|(w, x)| w * x.powi(4))
        .sum();
    let g_grid = 8.0 * PI * a / (r * r) * b4;
    let opts = MinimizeOptions {
        tol,
        ..MinimizeOptions::default()
    };
    let one_d = minimize_functional(1.0, &unit_trap, &MeanField { g: g_grid }, grids.z, &opts)?;
    let three_d = minimize_gp_3d_unit(&unit_trap, r, a, grids, tol, Some(&one_d.profile.values))?;
    let offset = three_d.e_perp_grid / (r * r);
    Ok(CrossoverPoint {
        r,
        a,
        g,
        g_grid,
        ratio: (three_d.reduced_energy - offset) / one_d.energy.total,
        e_3d: three_d.reduced_energy,
        e_1d: one_d.energy.total,
        transverse_offset: offset,
    })
}

/// Scattering length giving coupling `g` at transverse scale `r` for the
/// harmonic mode.
pub fn scattering_length_for(g: f64, r: f64) -> f64 {
    let b4 = TransverseMode::standard(TransverseKind::Harmonic).b4_integral;
    g * r * r / (8.0 * PI * b4)
}
