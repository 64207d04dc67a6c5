use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{TrapExponent, TrapSpec};
use crate::transverse3d::{effective_g, TransverseKind, TransverseMode};

/// Physical parameters of a trapped gas in solver units (`ħ = 2m = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub r: f64,
    pub a: f64,
    pub s: TrapExponent,
    pub transverse_kind: TransverseKind,
}

impl GasParams {
    pub fn new(n: f64, l: f64, r: f64, a: f64, s: TrapExponent, transverse_kind: TransverseKind) -> Self {
        Self {
            n,
            l,
            r,
            a,
            s,
            transverse_kind,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.s.validate()?;
        if !(self.n >= 1.0 && self.n.is_finite()) {
            return Err(Error::InvalidInput(format!("N must be at least 1, got {}", self.n)));
        }
        for (name, v) in [("L", self.l), ("r", self.r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidInput(format!("a must be nonnegative, got {}", self.a)));
        }
        Ok(())
    }

    /// Non-fatal issues with the parameter set.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.a >= self.r {
            out.push(format!("a = {} is not smaller than r = {}", self.a, self.r));
        }
        out
    }

    pub fn trap(&self) -> TrapSpec {
        TrapSpec::new(self.s, self.l)
    }

    /// `g = (8πa/r²) ∫ b⁴` for the configured transverse mode.
    pub fn coupling(&self) -> f64 {
        effective_g(self.a, self.r, TransverseMode::standard(self.transverse_kind))
    }

    /// `γ = N^{s/(s+2)} / L`.
    pub fn gamma(&self) -> f64 {
        density_parameter(self.n, self.l, self.s)
    }
}

/// `γ = (N/L) N^{−2/(s+2)}`.
pub fn density_parameter(n: f64, l: f64, s: TrapExponent) -> f64 {
    n.powf(s.gamma_exponent()) / l
}

/// `L̄_TF = L (NgL)^{1/(s+1)}`.
pub fn tf_length(n: f64, l: f64, g: f64, s: TrapExponent) -> f64 {
    l * (n * g * l).powf(s.tf_length_exponent())
}

/// `L̄_LL = L N^{2/(s+2)}`.
pub fn ll_length(n: f64, l: f64, s: TrapExponent) -> f64 {
    l * n.powf(s.ll_length_exponent())
}
