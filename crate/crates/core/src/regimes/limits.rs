use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::params::{density_parameter, ll_length, tf_length};
use crate::error::{Error, Result};
use crate::functional::{DensityProfile, Grid1D, LiebLiniger, LocalEnergy, TrapExponent, TrapSpec};
use crate::ll_core::LLEnergyTable;
use crate::numerics::quadrature::composite_gauss_legendre;
use crate::numerics::roots::{bracket_upwards, brent};

/// Pointwise minimizer rule `ρ = (F′)⁻¹(μ − V)₊` of a gradient-free functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum PointRule {
    /// `F = ½ρ²`.
    ThomasFermi,
    /// `F = (π²/3)ρ³`.
    Tonks,
    /// `F = ρ³e(g/ρ)` at unit-problem coupling `g`.
    LiebLiniger { g: f64 },
}

/// Minimizer of a gradient-free functional with `N = 1`, unit trap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitLimit {
    pub rule: PointRule,
    pub s: TrapExponent,
    pub mu: f64,
    pub energy: f64,
    pub potential_energy: f64,
    pub interaction_energy: f64,
    /// Support half-width.
    pub support: f64,
    #[serde(skip)]
    table: Option<LLEnergyTable>,
}

impl UnitLimit {
    fn local<'a>(&'a self) -> Box<dyn LocalEnergy + 'a> {
        local_energy(&self.rule, self.table.as_ref())
    }

    /// Density at `z` (zero outside the support).
    pub fn density(&self, z: f64) -> f64 {
        let v = self.s.unit_potential(z);
        if !v.is_finite() || v >= self.mu {
            return 0.0;
        }
        invert(&self.rule, self.local().as_ref(), self.mu - v).unwrap_or(0.0)
    }
}

struct HalfUnit;

impl LocalEnergy for HalfUnit {
    fn eval(&self, rho: f64) -> (f64, f64, f64) {
        (0.5 * rho * rho, rho, 1.0)
    }
}

fn local_energy<'a>(rule: &PointRule, table: Option<&'a LLEnergyTable>) -> Box<dyn LocalEnergy + 'a> {
    match rule {
        PointRule::ThomasFermi => Box::new(HalfUnit),
        PointRule::Tonks => Box::new(crate::functional::Tonks),
        PointRule::LiebLiniger { g } => Box::new(LiebLiniger {
            g: *g,
            table: table.expect("Lieb–Liniger rule carries a table"),
        }),
    }
}

/// Solves `F′(ρ) = y` for `ρ ≥ 0`.
fn invert(rule: &PointRule, local: &dyn LocalEnergy, y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    match rule {
        PointRule::ThomasFermi => Ok(y),
        PointRule::Tonks => Ok(y.sqrt() / PI),
        PointRule::LiebLiniger { g } => {
            let f = |rho: f64| local.eval(rho).1 - y;
            let guess = (y / g).min(y.sqrt() / PI).max(f64::MIN_POSITIVE);
            let (a, b) =
                bracket_upwards(f, 0.0, guess, 2000).ok_or_else(|| Error::Bracket("pointwise inversion".into()))?;
            let rho = brent(f, a, b, 1e-15 * b, 300).ok_or_else(|| Error::Bracket("pointwise inversion".into()))?;
            let up = local.eval(rho * (1.0 + 1e-6)).1;
            if !(up > local.eval(rho).1) {
                return Err(Error::Precondition(format!("F′ not increasing at ρ = {rho}")));
            }
            Ok(rho)
        }
    }
}

/// Gauss–Legendre nodes on `u ∈ [0,1]`, graded towards both ends: the
/// support edge at `u = 0` and the trap minimum, a cusp for `s < 1`, at `u = 1`.
fn graded_nodes() -> (Vec<f64>, Vec<f64>) {
    const BREAKS: [f64; 18] = [
        0.0, 1e-5, 1e-4, 1e-3, 1e-2, 0.05, 0.15, 0.3, 0.5, 0.75, 0.9, 0.97, 0.99, 0.997, 0.999, 0.9999, 0.99999, 1.0,
    ];
    let mut x = Vec::new();
    let mut w = Vec::new();
    for p in BREAKS.windows(2) {
        let (xs, ws) = composite_gauss_legendre(p[0], p[1], 1, 24);
        x.extend(xs);
        w.extend(ws);
    }
    (x, w)
}

/// `2∫₀^{z0} f(z) dz` through `z = z0(1 − u²)`, smooth at the support edge.
fn edge_integral(z0: f64, nodes: &(Vec<f64>, Vec<f64>), mut f: impl FnMut(f64) -> f64) -> f64 {
    let (x, w) = nodes;
    2.0 * x
        .iter()
        .zip(w)
        .map(|(u, wi)| wi * 2.0 * z0 * u * f(z0 * (1.0 - u * u)))
        .sum::<f64>()
}

/// Minimizer of `∫ V ρ + F(ρ)` with unit mass for the unit trap of exponent `s`.
pub fn solve_unit_limit(rule: PointRule, s: TrapExponent, table: Option<&LLEnergyTable>) -> Result<UnitLimit> {
    s.validate()?;
    if let PointRule::LiebLiniger { g } = rule {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidInput(format!("coupling must be positive, got {g}")));
        }
        if table.is_none() {
            return Err(Error::InvalidInput("Lieb–Liniger limit needs an energy table".into()));
        }
    }
    let local = local_energy(&rule, table);
    let local = local.as_ref();
    let (mu, support, potential_energy, interaction_energy) = match s {
        TrapExponent::HardWall => {
            let (f, f1, _) = local.eval(0.5);
            (f1, 1.0, 0.0, 2.0 * f)
        }
        TrapExponent::Power(sv) => {
            let nodes = graded_nodes();
            let mut failure = None;
            let mut mass = |mu: f64| -> f64 {
                if mu <= 0.0 {
                    return -1.0;
                }
                let z0 = mu.powf(1.0 / sv);
                edge_integral(z0, &nodes, |z| match invert(&rule, local, mu - z.powf(sv)) {
                    Ok(r) => r,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }) - 1.0
            };
            let bracket = bracket_upwards(&mut mass, 0.0, 1.0, 400);
            let (a, b) = bracket.ok_or_else(|| Error::Bracket(format!("chemical potential for s = {sv}")))?;
            let mu = brent(&mut mass, a, b, 1e-15 * b, 300)
                .ok_or_else(|| Error::Bracket(format!("chemical potential for s = {sv}")))?;
            if let Some(e) = failure {
                return Err(e);
            }
            let z0 = mu.powf(1.0 / sv);
            let mut pot = 0.0;
            let mut int = 0.0;
            let (x, w) = &nodes;
            for (u, wi) in x.iter().zip(w) {
                let z = z0 * (1.0 - u * u);
                let v = z.powf(sv);
                let rho = invert(&rule, local, mu - v)?;
                let jac = 4.0 * z0 * u * wi;
                pot += jac * v * rho;
                int += jac * local.eval(rho).0;
            }
            (mu, z0, pot, int)
        }
    };
    Ok(UnitLimit {
        rule,
        s,
        mu,
        energy: potential_energy + interaction_energy,
        potential_energy,
        interaction_energy,
        support,
        table: table.cloned(),
    })
}

/// A gradient-free limit functional solved through its scaling reduction:
/// `E = N·energy_scale·E₁`, `μ = energy_scale·μ₁`,
/// `ρ(z) = density_scale·ρ₁(z/length_scale)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitSolution {
    pub n: f64,
    pub energy: f64,
    pub mu: f64,
    pub length_scale: f64,
    pub density_scale: f64,
    pub energy_scale: f64,
    pub unit: UnitLimit,
}

impl LimitSolution {
    fn from_unit(n: f64, length_scale: f64, energy_scale: f64, unit: UnitLimit) -> Self {
        Self {
            n,
            energy: n * energy_scale * unit.energy,
            mu: energy_scale * unit.mu,
            length_scale,
            density_scale: n / length_scale,
            energy_scale,
            unit,
        }
    }

    pub fn density(&self, z: f64) -> f64 {
        self.density_scale * self.unit.density(z / self.length_scale)
    }

    pub fn support(&self) -> f64 {
        self.length_scale * self.unit.support
    }

    pub fn sample(&self, grid: Grid1D) -> DensityProfile {
        DensityProfile::from_fn(grid, self.n, |z| self.density(z))
    }
}

/// Thomas–Fermi: `ρ = [μ − V_L]₊/g`, reduced by
/// `E^TF(N,L,g) = (N/L²)(NgL)^{s/(s+1)} E^TF(1,1,1)`.
pub fn solve_tf(n: f64, trap: &TrapSpec, g: f64) -> Result<LimitSolution> {
    trap.validate()?;
    if !(g > 0.0) {
        return Err(Error::InvalidInput(format!("Thomas–Fermi needs g > 0, got {g}")));
    }
    let l = trap.length;
    let ngl = n * g * l;
    let exp = match trap.s {
        TrapExponent::Power(s) => s / (s + 1.0),
        TrapExponent::HardWall => 1.0,
    };
    let unit = solve_unit_limit(PointRule::ThomasFermi, trap.s, None)?;
    Ok(LimitSolution::from_unit(
        n,
        tf_length(n, l, g, trap.s),
        ngl.powf(exp) / (l * l),
        unit,
    ))
}

/// Girardeau–Tonks: `ρ = π⁻¹[μ − V_L]₊^{1/2}`, reduced by `E^GT(N,L) = Nγ²E^GT(1,1)`.
pub fn solve_gt(n: f64, trap: &TrapSpec) -> Result<LimitSolution> {
    trap.validate()?;
    let gamma = density_parameter(n, trap.length, trap.s);
    let unit = solve_unit_limit(PointRule::Tonks, trap.s, None)?;
    Ok(LimitSolution::from_unit(
        n,
        ll_length(n, trap.length, trap.s),
        gamma * gamma,
        unit,
    ))
}

/// Gradient-free Lieb–Liniger functional, reduced by
/// `E^LL(N,L,g) = Nγ² E^LL(1,1,g/γ)`.
pub fn solve_ll_functional(n: f64, trap: &TrapSpec, g: f64, table: &LLEnergyTable) -> Result<LimitSolution> {
    trap.validate()?;
    if !(g > 0.0) {
        return Err(Error::InvalidInput(format!(
            "Lieb–Liniger functional needs g > 0, got {g}"
        )));
    }
    let gamma = density_parameter(n, trap.length, trap.s);
    let unit = solve_unit_limit(PointRule::LiebLiniger { g: g / gamma }, trap.s, Some(table))?;
    Ok(LimitSolution::from_unit(
        n,
        ll_length(n, trap.length, trap.s),
        gamma * gamma,
        unit,
    ))
}

/// `μ^TF` of the unit problem, `((s+1)/(2s))^{s/(s+1)}`; `1/2` for the hard wall.
pub fn tf_unit_mu(s: TrapExponent) -> f64 {
    match s {
        TrapExponent::Power(s) => ((s + 1.0) / (2.0 * s)).powf(s / (s + 1.0)),
        TrapExponent::HardWall => 0.5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_fermi_harmonic_closed_form() {
        let u = solve_unit_limit(PointRule::ThomasFermi, TrapExponent::harmonic(), None).unwrap();
        assert!((u.mu - 0.75f64.powf(2.0 / 3.0)).abs() < 1e-13);
        assert!((u.energy - 0.8 * 0.75f64.powf(5.0 / 3.0)).abs() < 1e-13);
        for s in [0.5, 1.0, 3.0, 6.0] {
            let u = solve_unit_limit(PointRule::ThomasFermi, TrapExponent::Power(s), None).unwrap();
            assert!((u.mu - tf_unit_mu(TrapExponent::Power(s))).abs() < 1e-7 * u.mu, "s={s}");
        }
    }

    #[test]
    fn tonks_harmonic_closed_form() {
        let u = solve_unit_limit(PointRule::Tonks, TrapExponent::harmonic(), None).unwrap();
        assert!((u.mu - 2.0).abs() < 1e-12);
        assert!((u.energy - 1.0).abs() < 1e-12);
        assert!((u.potential_energy - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hard_wall_limits() {
        let tf = solve_tf(3.0, &TrapSpec::hard_wall(2.0), 0.5).unwrap();
        // uniform density N/2L
        assert!((tf.energy - 0.5 * 0.5 * (0.75f64).powi(2) * 4.0).abs() < 1e-12);
        assert!((tf.density(1.0) - 0.75).abs() < 1e-12);
        let gt = solve_gt(4.0, &TrapSpec::hard_wall(1.0)).unwrap();
        assert!((gt.energy - PI * PI / 3.0 * 8.0 * 2.0).abs() < 1e-10);
    }

    #[test]
    fn tf_scaling_is_exact() {
        let trap = TrapSpec::harmonic(3.0);
        let sol = solve_tf(50.0, &trap, 0.2).unwrap();
        let unit = solve_tf(1.0, &TrapSpec::harmonic(1.0), 1.0).unwrap();
        let pred = 50.0 / 9.0 * (50.0f64 * 0.2 * 3.0).powf(2.0 / 3.0) * unit.energy;
        assert!((sol.energy / pred - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tonks_edge_is_square_root() {
        let u = solve_unit_limit(PointRule::Tonks, TrapExponent::harmonic(), None).unwrap();
        let z0 = u.support;
        let (d1, d2) = (1e-4, 1e-6);
        let slope = (u.density(z0 - d1).ln() - u.density(z0 - d2).ln()) / (d1.ln() - d2.ln());
        assert!((slope - 0.5).abs() < 0.05, "{slope}");
    }
}
