use serde::{Deserialize, Serialize};

/// Homogeneity exponent of the longitudinal potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrapExponent {
    /// `V(z) = |z|^s`, `s > 0`.
    Power(f64),
    /// Box of half-width 1 with Dirichlet walls (`s = ∞`).
    HardWall,
}

impl TrapExponent {
    pub fn harmonic() -> Self {
        TrapExponent::Power(2.0)
    }

    /// `s/(s+2)`, the exponent in `γ = N^{s/(s+2)}/L`; 1 for the hard wall.
    pub fn gamma_exponent(self) -> f64 {
        match self {
            TrapExponent::Power(s) => s / (s + 2.0),
            TrapExponent::HardWall => 1.0,
        }
    }

    /// `1/(s+1)`, the exponent in `L̄_TF = L (NgL)^{1/(s+1)}`; 0 for the hard wall.
    pub fn tf_length_exponent(self) -> f64 {
        match self {
            TrapExponent::Power(s) => 1.0 / (s + 1.0),
            TrapExponent::HardWall => 0.0,
        }
    }

    /// `2/(s+2)`, the exponent in `L̄_LL = L N^{2/(s+2)}`; 0 for the hard wall.
    pub fn ll_length_exponent(self) -> f64 {
        match self {
            TrapExponent::Power(s) => 2.0 / (s + 2.0),
            TrapExponent::HardWall => 0.0,
        }
    }

    /// The unit-scale potential `V(z)`; `+∞` outside the box for the hard wall.
    pub fn unit_potential(self, z: f64) -> f64 {
        match self {
            TrapExponent::Power(s) => z.abs().powf(s),
            TrapExponent::HardWall => {
                if z.abs() <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn validate(self) -> crate::Result<()> {
        match self {
            TrapExponent::Power(s) if !(s > 0.0 && s.is_finite()) => Err(crate::Error::InvalidInput(format!(
                "trap exponent must be positive and finite, got {s}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Longitudinal trap `V_L(z) = V(z/L)/L²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapSpec {
    pub s: TrapExponent,
    #[serde(rename = "L")]
    pub length: f64,
}

impl TrapSpec {
    pub fn new(s: TrapExponent, length: f64) -> Self {
        Self { s, length }
    }

    pub fn harmonic(length: f64) -> Self {
        Self::new(TrapExponent::harmonic(), length)
    }

    pub fn hard_wall(half_width: f64) -> Self {
        Self::new(TrapExponent::HardWall, half_width)
    }

    pub fn potential(&self, z: f64) -> f64 {
        self.s.unit_potential(z / self.length) / (self.length * self.length)
    }

    pub fn is_hard_wall(&self) -> bool {
        matches!(self.s, TrapExponent::HardWall)
    }

    pub fn validate(&self) -> crate::Result<()> {
        self.s.validate()?;
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(crate::Error::InvalidInput(format!(
                "trap length must be positive, got {}",
                self.length
            )));
        }
        Ok(())
    }
}
