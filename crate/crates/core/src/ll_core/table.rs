use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::nystrom::{solve_ll_point_from, LLPoint};
use crate::error::{Error, Result};
use crate::numerics::logspace;

const FERMI: f64 = PI * PI / 3.0;
const TABLE_VERSION: u32 = 1;

/// Construction parameters for [`LLEnergyTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableSpec {
    pub t_lo: f64,
    pub t_hi: f64,
    pub knots_per_decade: usize,
    pub quad_order: usize,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            t_lo: 1e-2,
            t_hi: 1e3,
            knots_per_decade: 40,
            quad_order: 24,
        }
    }
}

/// Weak-coupling series `e(t)` for `t → 0` (canonical `γ = t/2`).
pub fn weak_series(t: f64) -> (f64, f64) {
    let c2 = 1.0 / 6.0 - 1.0 / (PI * PI);
    let g = 0.5 * t;
    let e = g - 4.0 / (3.0 * PI) * g.powf(1.5) + c2 * g * g;
    let de = 0.5 * (1.0 - 2.0 / PI * g.sqrt() + 2.0 * c2 * g);
    (e, de)
}

/// Strong-coupling series `e(t)` for `t → ∞`.
pub fn strong_series(t: f64) -> (f64, f64) {
    let c3 = 32.0 * (1.0 - PI * PI / 15.0);
    let g = 0.5 * t;
    let e = FERMI * (1.0 - 4.0 / g + 12.0 / (g * g) - c3 / (g * g * g));
    let de = 0.5 * FERMI * (4.0 / (g * g) - 24.0 / (g * g * g) + 3.0 * c3 / g.powi(4));
    (e, de)
}

/// Tabulated `e(t)` with asymptotic tails. Immutable once built.
#[derive(Debug, Clone)]
pub struct LLEnergyTable {
    knots: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    t_lo: f64,
    t_hi: f64,
    quad_order: usize,
    // derived
    log_knots: Vec<f64>,
    log_slopes: Vec<f64>,
    lo_shift: f64,
    hi_shift: f64,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    version: u32,
    knots: Vec<f64>,
    e: Vec<f64>,
    e_prime: Vec<f64>,
    t_lo: f64,
    t_hi: f64,
    quad_order: usize,
}

impl LLEnergyTable {
    /// Solves the integral equation on every knot, continuing the kernel
    /// parameter from one knot to the next.
    pub fn build(spec: TableSpec) -> Result<Self> {
        if !(spec.t_lo > 0.0 && spec.t_hi > spec.t_lo && spec.knots_per_decade >= 2) {
            return Err(Error::InvalidInput(format!("bad table spec {spec:?}")));
        }
        let decades = (spec.t_hi / spec.t_lo).log10();
        let n = (decades * spec.knots_per_decade as f64).round() as usize + 1;
        let knots = logspace(spec.t_lo, spec.t_hi, n.max(2));
        let mut values = Vec::with_capacity(knots.len());
        let mut derivs = Vec::with_capacity(knots.len());
        let mut lambda = None;
        for &t in &knots {
            let (p, l) = solve_ll_point_from(t, spec.quad_order, lambda)?;
            lambda = Some(l);
            values.push(p.e);
            derivs.push(p.e_prime);
        }
        Self::from_parts(knots, values, derivs, spec.t_lo, spec.t_hi, spec.quad_order)
    }

    /// Process-wide table built with [`TableSpec::default`].
    pub fn standard() -> &'static LLEnergyTable {
        static TABLE: OnceLock<LLEnergyTable> = OnceLock::new();
        TABLE.get_or_init(|| LLEnergyTable::build(TableSpec::default()).expect("default energy table"))
    }

    fn from_parts(
        knots: Vec<f64>,
        values: Vec<f64>,
        derivs: Vec<f64>,
        t_lo: f64,
        t_hi: f64,
        quad_order: usize,
    ) -> Result<Self> {
        let n = knots.len();
        if n < 2 || values.len() != n || derivs.len() != n {
            return Err(Error::InvalidTable(
                "knot, value and derivative arrays must have equal length ≥ 2".into(),
            ));
        }
        if (knots[0] - t_lo).abs() > 1e-12 * t_lo || (knots[n - 1] - t_hi).abs() > 1e-12 * t_hi {
            return Err(Error::InvalidTable(
                "tail switch points must coincide with the end knots".into(),
            ));
        }
        let log_knots: Vec<f64> = knots.iter().map(|t| t.ln()).collect();
        let mut log_slopes: Vec<f64> = knots.iter().zip(&derivs).map(|(t, d)| t * d).collect();
        // Fritsch–Carlson limiter; inactive for an accurate table
        for k in 0..n - 1 {
            let secant = (values[k + 1] - values[k]) / (log_knots[k + 1] - log_knots[k]);
            if secant <= 0.0 {
                continue;
            }
            let (a, b) = (log_slopes[k] / secant, log_slopes[k + 1] / secant);
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                log_slopes[k] = tau * a * secant;
                log_slopes[k + 1] = tau * b * secant;
            }
        }
        let table = Self {
            lo_shift: values[0] - weak_series(t_lo).0,
            hi_shift: values[n - 1] - strong_series(t_hi).0,
            knots,
            values,
            derivs,
            t_lo,
            t_hi,
            quad_order,
            log_knots,
            log_slopes,
        };
        table.check_invariants()?;
        Ok(table)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.derivs
    }

    pub fn switch_points(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    /// Verifies the structural properties every valid table has:
    /// monotone increase, the fermionic ceiling, concavity, `e(t) ≤ t/2`
    /// and convexity of `t³e(1/t)`.
    pub fn check_invariants(&self) -> Result<()> {
        let (k, v) = (&self.knots, &self.values);
        let n = k.len();
        for i in 0..n {
            if !(v[i].is_finite() && v[i] > 0.0 && v[i] < FERMI) {
                return Err(Error::InvalidTable(format!("e({}) = {} outside (0, π²/3)", k[i], v[i])));
            }
            if v[i] > 0.5 * k[i] * (1.0 + 1e-12) {
                return Err(Error::InvalidTable(format!("e({}) exceeds t/2", k[i])));
            }
            if self.derivs[i] < 0.0 {
                return Err(Error::InvalidTable(format!("negative slope at t = {}", k[i])));
            }
            if i > 0 && !(k[i] > k[i - 1] && v[i] > v[i - 1]) {
                return Err(Error::InvalidTable(format!("not strictly increasing at t = {}", k[i])));
            }
        }
        let tol = 1e-9;
        for i in 1..n - 1 {
            let d2 = second_divided_difference(k[i - 1], k[i], k[i + 1], v[i - 1], v[i], v[i + 1]);
            let scale = v[i] / (k[i] * k[i]);
            if d2 > tol * scale {
                return Err(Error::InvalidTable(format!("concavity violated near t = {}", k[i])));
            }
            // h(u) = u³ e(1/u) sampled at u = 1/t
            let (u0, u1, u2) = (1.0 / k[i + 1], 1.0 / k[i], 1.0 / k[i - 1]);
            let h = |u: f64, e: f64| u * u * u * e;
            let d2h = second_divided_difference(u0, u1, u2, h(u0, v[i + 1]), h(u1, v[i]), h(u2, v[i - 1]));
            let hscale = h(u1, v[i]) / (u1 * u1);
            if d2h < -tol * hscale {
                return Err(Error::InvalidTable(format!("t³e(1/t) not convex near t = {}", k[i])));
            }
        }
        Ok(())
    }

    /// Evaluates `e` and `e′` at coupling ratio `t ≥ 0`.
    pub fn eval_e(&self, t: f64) -> LLPoint {
        let (e, e_prime, _) = self.eval_full(t);
        LLPoint { t, e, e_prime }
    }

    /// `(e, e′, e″)` at `t`.
    pub fn eval_full(&self, t: f64) -> (f64, f64, f64) {
        debug_assert!(t >= 0.0 || t.is_nan());
        if !(t > 0.0) {
            return (0.0, 0.5, f64::NEG_INFINITY);
        }
        if t < self.t_lo {
            let (w, dw) = weak_series(t);
            let c2 = 1.0 / 6.0 - 1.0 / (PI * PI);
            let g = 0.5 * t;
            let d2w = 0.25 * (-1.0 / (PI * g.sqrt()) + 2.0 * c2);
            let r = t / self.t_lo;
            let s = self.lo_shift;
            return (
                w + s * r * r * r,
                dw + 3.0 * s * r * r / self.t_lo,
                d2w + 6.0 * s * r / (self.t_lo * self.t_lo),
            );
        }
        if t > self.t_hi {
            let (sv, ds) = strong_series(t);
            let c3 = 32.0 * (1.0 - PI * PI / 15.0);
            let g = 0.5 * t;
            let d2s = 0.25 * FERMI * (-8.0 / g.powi(3) + 72.0 / g.powi(4) - 12.0 * c3 / g.powi(5));
            let r = self.t_hi / t;
            let s = self.hi_shift;
            return (
                sv + s * r.powi(4),
                ds - 4.0 * s * r.powi(4) / t,
                d2s + 20.0 * s * r.powi(4) / (t * t),
            );
        }
        let x = t.ln();
        let k = match self.log_knots.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => {
                if i == self.knots.len() - 1 {
                    i - 1
                } else {
                    i
                }
            }
            Err(i) => i.saturating_sub(1).min(self.knots.len() - 2),
        };
        let h = self.log_knots[k + 1] - self.log_knots[k];
        let s = (x - self.log_knots[k]) / h;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.log_slopes[k] * h, self.log_slopes[k + 1] * h);
        let (s2, s3) = (s * s, s * s * s);
        let e =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        let de_dx = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (6.0 * s - 6.0 * s2) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        let d2e_dx2 =
            ((12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (6.0 - 12.0 * s) * y1 + (6.0 * s - 2.0) * m1) / (h * h);
        (e, de_dx / t, (d2e_dx2 - de_dx) / (t * t))
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TableFile {
            version: TABLE_VERSION,
            knots: self.knots.clone(),
            e: self.values.clone(),
            e_prime: self.derivs.clone(),
            t_lo: self.t_lo,
            t_hi: self.t_hi,
            quad_order: self.quad_order,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses a serialized table; fails unless the version matches and every
    /// invariant in [`LLEnergyTable::check_invariants`] holds.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        if file.version != TABLE_VERSION {
            return Err(Error::InvalidTable(format!("unsupported version {}", file.version)));
        }
        Self::from_parts(file.knots, file.e, file.e_prime, file.t_lo, file.t_hi, file.quad_order)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn second_divided_difference(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    2.0 * (d12 - d01) / (x2 - x0)
}

/// Free-function form of [`LLEnergyTable::eval_e`].
pub fn eval_e(table: &LLEnergyTable, t: f64) -> LLPoint {
    table.eval_e(t)
}

/// Local energy density `ρ³ e(g/ρ)`, continuously extended by 0 at `ρ = 0`.
pub fn energy_density(rho: f64, g: f64, table: &LLEnergyTable) -> f64 {
    if rho <= 0.0 || g <= 0.0 {
        return 0.0;
    }
    rho * rho * rho * table.eval_e(g / rho).e
}

/// `d/dρ [ρ³ e(g/ρ)] = 3ρ² e − gρ e′`, extended by 0 at `ρ = 0`.
pub fn energy_density_derivative(rho: f64, g: f64, table: &LLEnergyTable) -> f64 {
    if rho <= 0.0 || g <= 0.0 {
        return 0.0;
    }
    let p = table.eval_e(g / rho);
    3.0 * rho * rho * p.e - g * rho * p.e_prime
}
