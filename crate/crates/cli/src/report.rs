//! JSON reports and CSV formatting.

use serde::{Deserialize, Serialize};

use bellspace::DeterministicStrategy;

/// Result of one subcommand; absent fields were not computed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chsh_at_settings: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chsh_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceeds_two: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhv_feasible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhv_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub runtime_ms: u64,
}

/// One entry of a witness sidecar file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub signs_a: Vec<i8>,
    pub signs_b: Vec<i8>,
    pub weight: f64,
}

impl WitnessEntry {
    pub fn strategy(&self) -> DeterministicStrategy {
        DeterministicStrategy {
            signs_a: self.signs_a.clone(),
            signs_b: self.signs_b.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSummary {
    pub param: String,
    pub rows: usize,
    pub out: String,
    /// Consecutive grid values between which `g` crosses `1/sqrt(2)`.
    pub crossing: Option<Bracket>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperReport {
    pub g: f64,
    pub g_quadrature: f64,
    pub bound: f64,
    pub threshold: f64,
    pub chsh_max: f64,
    pub chsh_max_unlocalized: f64,
    pub verdict: String,
    pub lhv_feasible: bool,
    pub lhv_feasible_unlocalized: bool,
    pub threshold_half_width: f64,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}
