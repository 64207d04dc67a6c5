use serde::{Deserialize, Serialize};

use super::params::{ll_length, tf_length, GasParams};
use crate::functional::{validity_from_mean_density, ValidityRecord, ValidityThresholds};
use crate::ll_core::LLEnergyTable;

/// Region boundaries on `NgL` (`θ₁`, `θ₂`) and `g/γ` (`θ₃`, `θ₄`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            theta1: 0.1,
            theta2: 10.0,
            theta3: 0.1,
            theta4: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    IdealGas = 1,
    GrossPitaevskii = 2,
    ThomasFermi = 3,
    LiebLiniger = 4,
    GirardeauTonks = 5,
}

impl Region {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::IdealGas => "ideal-gas",
            Region::GrossPitaevskii => "1d-gp",
            Region::ThomasFermi => "1d-tf",
            Region::LiebLiniger => "lieb-liniger",
            Region::GirardeauTonks => "girardeau-tonks",
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Some(match n {
            1 => Region::IdealGas,
            2 => Region::GrossPitaevskii,
            3 => Region::ThomasFermi,
            4 => Region::LiebLiniger,
            5 => Region::GirardeauTonks,
            _ => return None,
        })
    }

    /// Threshold rule on the two dimensionless coordinates.
    pub fn from_coordinates(ngl: f64, g_over_gamma: f64, th: &Thresholds) -> Self {
        if ngl < th.theta1 {
            Region::IdealGas
        } else if ngl <= th.theta2 {
            Region::GrossPitaevskii
        } else if g_over_gamma < th.theta3 {
            Region::ThomasFermi
        } else if g_over_gamma <= th.theta4 {
            Region::LiebLiniger
        } else {
            Region::GirardeauTonks
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct RegimeReport {
    pub g: f64,
    pub gamma: f64,
    pub NgL: f64,
    pub g_over_gamma: f64,
    pub g_over_rhobar: f64,
    pub Lbar_TF: f64,
    pub Lbar_LL: f64,
    pub region: u8,
    pub label: String,
    pub validity: ValidityRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhobar_self_consistent: Option<f64>,
}

impl RegimeReport {
    pub fn region(&self) -> Region {
        Region::from_number(self.region).expect("report holds a valid region")
    }
}

/// `ρ̄` from the scaling of `region`.
pub fn regional_mean_density(p: &GasParams, g: f64, region: Region) -> f64 {
    match region {
        Region::IdealGas | Region::GrossPitaevskii => p.n / p.l,
        Region::ThomasFermi => p.n / tf_length(p.n, p.l, g, p.s),
        Region::LiebLiniger | Region::GirardeauTonks => p.gamma(),
    }
}

/// Classifies `params` into Regions 1–5 by the threshold rule.
pub fn classify(params: &GasParams, thresholds: &Thresholds) -> RegimeReport {
    classify_with(
        params,
        thresholds,
        LLEnergyTable::standard(),
        &ValidityThresholds::default(),
    )
}

pub fn classify_with(
    params: &GasParams,
    thresholds: &Thresholds,
    table: &LLEnergyTable,
    validity: &ValidityThresholds,
) -> RegimeReport {
    let g = params.coupling();
    let gamma = params.gamma();
    let ngl = params.n * g * params.l;
    let g_over_gamma = g / gamma;
    let region = Region::from_coordinates(ngl, g_over_gamma, thresholds);
    let rhobar = regional_mean_density(params, g, region);
    RegimeReport {
        g,
        gamma,
        NgL: ngl,
        g_over_gamma,
        g_over_rhobar: g / rhobar,
        Lbar_TF: tf_length(params.n, params.l, g, params.s),
        Lbar_LL: ll_length(params.n, params.l, params.s),
        region: region.number(),
        label: region.label().to_string(),
        validity: validity_from_mean_density(params, g, rhobar, table, validity),
        rhobar_self_consistent: None,
    }
}
