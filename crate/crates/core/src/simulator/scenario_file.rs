//! Scenario files.
//!
//! Same conventions as calibration profiles: a TOML document with a
//! `version = 1` field and no unknown keys. Every field except `version` is
//! optional and defaults to [`Scenario::default`].
//!
//! ```toml
//! version = 1
//! seed = 7
//! noise_sigma_db = 0.1
//! quantize_step_db = 0.5
//! ground_coupling_offset_db = -6.0
//! attenuation_per_lb_db = 0.25
//! tx_position = "above"
//!
//! [budget]
//! tx_power_dbm = 20.0
//! tx_antenna_gain_dbi = 2.15
//! rx_antenna_gain_dbi = 2.15
//! system_gain_db = -5.0
//! frequency_hz = 915e6
//! distance_m = 1.524
//!
//! [environment]
//! kind = "indoor_open"
//! multipath_offset_db = 0.0   # optional, defaults per kind
//!
//! [[contents]]
//! label = "produce"
//! weight_lb = 17.0
//! attenuation_db = 9.0        # optional, defaults to weight * attenuation_per_lb_db
//! ```
//!
//! `seed` is a TOML integer; negative values are taken as their two's
//! complement `u64` bit pattern.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{Content, Environment, EnvironmentKind, Scenario};
use crate::signal_model::{LinkBudget, MaterialLayer};
use crate::stats::TxPosition;
use crate::{Error, Result};

pub const SCENARIO_VERSION: i64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    version: i64,
    seed: Option<i64>,
    noise_sigma_db: Option<f64>,
    quantize_step_db: Option<f64>,
    ground_coupling_offset_db: Option<f64>,
    attenuation_per_lb_db: Option<f64>,
    tx_position: Option<TxPosition>,
    budget: Option<BudgetDoc>,
    environment: Option<EnvironmentDoc>,
    #[serde(default)]
    contents: Vec<ContentDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BudgetDoc {
    tx_power_dbm: Option<f64>,
    tx_antenna_gain_dbi: Option<f64>,
    rx_antenna_gain_dbi: Option<f64>,
    system_gain_db: Option<f64>,
    frequency_hz: Option<f64>,
    distance_m: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvironmentDoc {
    kind: String,
    multipath_offset_db: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContentDoc {
    label: String,
    weight_lb: f64,
    attenuation_db: Option<f64>,
}

pub fn scenario_from_str(text: &str) -> Result<Scenario> {
    let invalid = |msg: String| Error::InvalidScenario(msg);
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| invalid(e.message().to_string()))?;
    match table.get("version") {
        Some(toml::Value::Integer(v)) if *v == SCENARIO_VERSION => {}
        Some(toml::Value::Integer(v)) => {
            return Err(Error::Version {
                kind: "scenario",
                found: *v,
                expected: SCENARIO_VERSION,
            })
        }
        Some(_) => return Err(invalid("`version` must be an integer".into())),
        None => return Err(invalid("missing field `version`".into())),
    }
    let doc: ScenarioDoc = table
        .try_into()
        .map_err(|e: toml::de::Error| invalid(e.message().to_string()))?;
    debug_assert_eq!(doc.version, SCENARIO_VERSION);

    let mut sc = Scenario::default();
    if let Some(b) = doc.budget {
        let d = LinkBudget::trash_bin_default();
        sc.budget = LinkBudget {
            tx_power_dbm: b.tx_power_dbm.unwrap_or(d.tx_power_dbm),
            tx_antenna_gain_dbi: b.tx_antenna_gain_dbi.unwrap_or(d.tx_antenna_gain_dbi),
            rx_antenna_gain_dbi: b.rx_antenna_gain_dbi.unwrap_or(d.rx_antenna_gain_dbi),
            system_gain_db: b.system_gain_db.unwrap_or(d.system_gain_db),
            frequency_hz: b.frequency_hz.unwrap_or(d.frequency_hz),
            distance_m: b.distance_m.unwrap_or(d.distance_m),
        };
    }
    if let Some(env) = doc.environment {
        let kind: EnvironmentKind = env.kind.parse().map_err(invalid)?;
        sc.environment = Environment {
            kind,
            multipath_offset_db: env.multipath_offset_db.unwrap_or(kind.default_offset_db()),
        };
    }
    if let Some(seed) = doc.seed {
        sc.seed = seed as u64;
    }
    sc.noise_sigma_db = doc.noise_sigma_db.unwrap_or(sc.noise_sigma_db);
    sc.quantize_step_db = doc.quantize_step_db.unwrap_or(sc.quantize_step_db);
    sc.ground_coupling_offset_db = doc
        .ground_coupling_offset_db
        .unwrap_or(sc.ground_coupling_offset_db);
    sc.attenuation_per_lb_db = doc.attenuation_per_lb_db.unwrap_or(sc.attenuation_per_lb_db);
    sc.tx_position = doc.tx_position.unwrap_or(sc.tx_position);
    sc.contents = doc
        .contents
        .into_iter()
        .map(|c| match c.attenuation_db {
            Some(a) => Content::new(
                c.weight_lb,
                MaterialLayer {
                    label: c.label,
                    attenuation_db: a,
                },
            ),
            None => Content::by_weight(c.label, c.weight_lb, sc.attenuation_per_lb_db),
        })
        .collect();

    sc.validate()?;
    Ok(sc)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    scenario_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_is_default_scenario() {
        assert_eq!(scenario_from_str("version = 1\n").unwrap(), Scenario::default());
    }

    #[test]
    fn full_file() {
        let text = r#"
version = 1
seed = -1
noise_sigma_db = 0.8
quantize_step_db = 0.5
ground_coupling_offset_db = -6.0
attenuation_per_lb_db = 0.25
tx_position = "below"

[budget]
tx_power_dbm = 1.0
frequency_hz = 433e6

[environment]
kind = "indoor_lab"

[[contents]]
label = "produce"
weight_lb = 17.0
attenuation_db = 9.0

[[contents]]
label = "bread"
weight_lb = 4.0
"#;
        let sc = scenario_from_str(text).unwrap();
        assert_eq!(sc.seed, u64::MAX);
        assert_eq!(sc.budget.tx_power_dbm, 1.0);
        assert_eq!(sc.budget.frequency_hz, 433e6);
        assert_eq!(sc.budget.distance_m, 1.524);
        assert_eq!(sc.environment.multipath_offset_db, 3.0);
        assert_eq!(sc.tx_position, TxPosition::Below);
        assert_eq!(sc.contents[0].layer.attenuation_db, 9.0);
        assert_eq!(sc.contents[1].layer.attenuation_db, 1.0);
        assert_eq!(sc.total_weight_lb(), 21.0);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(scenario_from_str("seed = 1\n"), Err(Error::InvalidScenario(_))));
        assert!(matches!(
            scenario_from_str("version = 3\n"),
            Err(Error::Version { found: 3, .. })
        ));
        assert!(scenario_from_str("version = 1\nnoise = 1.0\n").is_err());
        assert!(scenario_from_str("version = 1\nnoise_sigma_db = -1.0\n").is_err());
        assert!(scenario_from_str("version = 1\n[environment]\nkind = \"basement\"\n").is_err());
        assert!(scenario_from_str("version = 1\n[budget]\ndistance_m = 0.0\n").is_err());
    }
}
