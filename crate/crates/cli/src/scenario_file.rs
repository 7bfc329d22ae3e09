//! JSON scenario files.
//!
//! All coordinates are in units of `1/m`, so a file describes the same
//! dimensionless geometry for every inverse width; physical lengths are the
//! file values divided by `inverse_width`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use bellspace::{BoxRegion, ChshSettings, ProductWaveFunction, Scenario, UnitVector3};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsFile {
    pub a: UnitVector3,
    pub a_prime: UnitVector3,
    pub b: UnitVector3,
    pub b_prime: UnitVector3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub inverse_width: f64,
    pub mean1: [f64; 3],
    pub mean2: [f64; 3],
    pub region1: BoxRegion,
    pub region2: BoxRegion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings: Option<SettingsFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings_a: Option<Vec<UnitVector3>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings_b: Option<Vec<UnitVector3>>,
}

fn scale(v: [f64; 3], m: f64) -> [f64; 3] {
    v.map(|c| c / m)
}

fn scale_box(r: &BoxRegion, m: f64) -> Result<BoxRegion, bellspace::Error> {
    BoxRegion::new(scale(r.lo(), m), scale(r.hi(), m))
}

impl ScenarioFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        // Surface geometry errors now, with the offending field named.
        file.scenario().map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e,
        })?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn scenario(&self) -> Result<Scenario, String> {
        let m = self.inverse_width;
        let wave = ProductWaveFunction::new(m, scale(self.mean1, m), scale(self.mean2, m))
            .map_err(|e| format!("field `inverse_width`/`mean1`/`mean2`: {e}"))?;
        let region1 = scale_box(&self.region1, m).map_err(|e| format!("field `region1`: {e}"))?;
        let region2 = scale_box(&self.region2, m).map_err(|e| format!("field `region2`: {e}"))?;
        Ok(Scenario::new(wave, region1, region2))
    }

    pub fn chsh_settings(&self) -> Option<ChshSettings> {
        self.settings.as_ref().map(|s| ChshSettings {
            a: s.a,
            a_prime: s.a_prime,
            b: s.b,
            b_prime: s.b_prime,
        })
    }

    /// The symmetric example: unit boxes on packets ten widths apart.
    pub fn paper_example() -> ScenarioFile {
        let tsirelson = bellspace::tsirelson_settings();
        ScenarioFile {
            inverse_width: 1.0,
            mean1: [0.0; 3],
            mean2: [10.0, 0.0, 0.0],
            region1: BoxRegion::cube([0.0; 3], 1.0).unwrap(),
            region2: BoxRegion::cube([10.0, 0.0, 0.0], 1.0).unwrap(),
            settings: Some(SettingsFile {
                a: tsirelson.a,
                a_prime: tsirelson.a_prime,
                b: tsirelson.b,
                b_prime: tsirelson.b_prime,
            }),
            settings_a: Some(vec![tsirelson.a, tsirelson.a_prime]),
            settings_b: Some(vec![tsirelson.b, tsirelson.b_prime]),
        }
    }
}
