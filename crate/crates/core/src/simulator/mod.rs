//! Deterministic stand-in for the transceiver pair and the bin between them.
//!
//! A reading is the link-budget prediction for the scenario's material stack,
//! shifted by the environment's multipath offset and the ground-coupling
//! offset, plus seeded Gaussian noise, optionally rounded to a register step.

mod noise;
mod scenario_file;

pub use noise::GaussianNoise;
pub use scenario_file::{load_scenario, scenario_from_str, SCENARIO_VERSION};

use std::fmt;
use std::str::FromStr;

use crate::signal_model::{expected_rssi, LinkBudget, MaterialLayer};
use crate::stats::{ReadingSession, RssiReading, SessionMeta, TxPosition, MIN_READINGS_PER_SESSION};
use crate::{Error, Result};

/// Readings per simulated session unless told otherwise.
pub const DEFAULT_READINGS: usize = MIN_READINGS_PER_SESSION;

/// Register granularity typical of this transceiver class, dB.
pub const HALF_DB_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentKind {
    IndoorLab,
    IndoorOpen,
    Outdoor,
}

impl EnvironmentKind {
    /// Reflections off nearby walls strengthen the lab link; open spaces
    /// reflect less.
    pub fn default_offset_db(self) -> f64 {
        match self {
            EnvironmentKind::IndoorLab => 3.0,
            EnvironmentKind::IndoorOpen => 0.0,
            EnvironmentKind::Outdoor => -2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EnvironmentKind::IndoorLab => "indoor_lab",
            EnvironmentKind::IndoorOpen => "indoor_open",
            EnvironmentKind::Outdoor => "outdoor",
        }
    }
}

impl fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for EnvironmentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "indoor_lab" => Ok(EnvironmentKind::IndoorLab),
            "indoor_open" => Ok(EnvironmentKind::IndoorOpen),
            "outdoor" => Ok(EnvironmentKind::Outdoor),
            other => Err(format!(
                "unknown environment `{other}` (expected indoor_lab, indoor_open or outdoor)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub kind: EnvironmentKind,
    pub multipath_offset_db: f64,
}

impl From<EnvironmentKind> for Environment {
    fn from(kind: EnvironmentKind) -> Self {
        Environment {
            kind,
            multipath_offset_db: kind.default_offset_db(),
        }
    }
}

/// Something in the bin: its weight and the layer it adds to the link.
#[derive(Debug, Clone, PartialEq)]
pub struct Content {
    pub weight_lb: f64,
    pub layer: MaterialLayer,
}

impl Content {
    pub fn new(weight_lb: f64, layer: MaterialLayer) -> Self {
        Content { weight_lb, layer }
    }

    /// A layer whose attenuation is `weight_lb * attenuation_per_lb_db`.
    pub fn by_weight(label: impl Into<String>, weight_lb: f64, attenuation_per_lb_db: f64) -> Self {
        Content {
            weight_lb,
            layer: MaterialLayer {
                label: label.into(),
                attenuation_db: weight_lb * attenuation_per_lb_db,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub budget: LinkBudget,
    pub environment: Environment,
    pub contents: Vec<Content>,
    /// Attenuation per pound applied to fill-series weights.
    pub attenuation_per_lb_db: f64,
    pub noise_sigma_db: f64,
    /// Shift from whatever sits around the ground transceiver.
    pub ground_coupling_offset_db: f64,
    /// Round readings to multiples of this step; 0 disables rounding.
    pub quantize_step_db: f64,
    pub seed: u64,
    pub tx_position: TxPosition,
}

impl Default for Scenario {
    /// Empty bin in an open indoor space, noiseless.
    fn default() -> Self {
        Scenario {
            budget: LinkBudget::trash_bin_default(),
            environment: EnvironmentKind::IndoorOpen.into(),
            contents: Vec::new(),
            attenuation_per_lb_db: 0.0,
            noise_sigma_db: 0.0,
            ground_coupling_offset_db: 0.0,
            quantize_step_db: 0.0,
            seed: 0,
            tx_position: TxPosition::Above,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        let b = &self.budget;
        for (name, v) in [
            ("tx_power_dbm", b.tx_power_dbm),
            ("tx_antenna_gain_dbi", b.tx_antenna_gain_dbi),
            ("rx_antenna_gain_dbi", b.rx_antenna_gain_dbi),
            ("system_gain_db", b.system_gain_db),
            ("multipath_offset_db", self.environment.multipath_offset_db),
            ("attenuation_per_lb_db", self.attenuation_per_lb_db),
            ("ground_coupling_offset_db", self.ground_coupling_offset_db),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite, got {v}"));
            }
        }
        if !(b.distance_m > 0.0 && b.distance_m.is_finite()) {
            return bad(format!("distance_m must be positive, got {}", b.distance_m));
        }
        if !(b.frequency_hz > 0.0 && b.frequency_hz.is_finite()) {
            return bad(format!("frequency_hz must be positive, got {}", b.frequency_hz));
        }
        if !(self.noise_sigma_db >= 0.0 && self.noise_sigma_db.is_finite()) {
            return bad(format!("noise_sigma_db must be >= 0, got {}", self.noise_sigma_db));
        }
        if !(self.quantize_step_db >= 0.0 && self.quantize_step_db.is_finite()) {
            return bad(format!(
                "quantize_step_db must be >= 0, got {}",
                self.quantize_step_db
            ));
        }
        for c in &self.contents {
            if !(c.weight_lb >= 0.0 && c.weight_lb.is_finite()) {
                return bad(format!("content `{}` has invalid weight {}", c.layer.label, c.weight_lb));
            }
            if !c.layer.attenuation_db.is_finite() {
                return bad(format!("content `{}` has non-finite attenuation", c.layer.label));
            }
        }
        Ok(())
    }

    pub fn total_weight_lb(&self) -> f64 {
        self.contents.iter().fold(0.0, |acc, c| acc + c.weight_lb)
    }

    fn layers(&self) -> Vec<MaterialLayer> {
        self.contents.iter().map(|c| c.layer.clone()).collect()
    }

    /// Noise-free reading before quantization.
    pub fn deterministic_rssi(&self) -> Result<f64> {
        Ok(expected_rssi(&self.budget, &self.layers())?
            + self.environment.multipath_offset_db
            + self.ground_coupling_offset_db)
    }

    fn meta(&self) -> SessionMeta {
        let material = if self.contents.is_empty() {
            "empty".to_string()
        } else {
            self.contents
                .iter()
                .map(|c| c.layer.label.as_str())
                .collect::<Vec<_>>()
                .join("+")
        };
        SessionMeta {
            environment: Some(self.environment.kind.label().to_string()),
            tx_power_dbm: Some(self.budget.tx_power_dbm),
            tx_position: Some(self.tx_position),
            material: Some(material),
            weight_lb: Some(self.total_weight_lb()),
            ..SessionMeta::default()
        }
    }

    fn draw(&self, n_readings: usize, noise: &mut GaussianNoise) -> Result<ReadingSession> {
        let base = self.deterministic_rssi()?;
        let readings = (0..n_readings)
            .map(|i| {
                let mut v = base + noise.sample(self.noise_sigma_db);
                if self.quantize_step_db > 0.0 {
                    v = (v / self.quantize_step_db).round() * self.quantize_step_db;
                }
                RssiReading {
                    sequence_index: i as u64,
                    rssi_dbm: v,
                }
            })
            .collect();
        Ok(ReadingSession {
            readings,
            meta: self.meta(),
        })
    }
}

fn check_count(n_readings: usize) -> Result<()> {
    if n_readings == 0 {
        return Err(Error::InvalidScenario("n_readings must be at least 1".into()));
    }
    Ok(())
}

/// Generates one session of `n_readings` readings from the scenario.
pub fn simulate_session(scenario: &Scenario, n_readings: usize) -> Result<ReadingSession> {
    scenario.validate()?;
    check_count(n_readings)?;
    scenario.draw(n_readings, &mut GaussianNoise::new(scenario.seed))
}

/// One session per cumulative fill weight, each weight adding
/// `attenuation_per_lb_db * weight` on top of the base contents.
///
/// All sessions draw from one noise stream seeded by the base scenario, so
/// the series as a whole is reproducible.
pub fn simulate_fill_series(
    base: &Scenario,
    weights_lb: &[f64],
    n_readings: usize,
) -> Result<Vec<(f64, ReadingSession)>> {
    let steps: Vec<(f64, f64)> = weights_lb
        .iter()
        .map(|&w| (w, w * base.attenuation_per_lb_db))
        .collect();
    simulate_fill_table(base, &steps, n_readings)
}

/// Like [`simulate_fill_series`] but with the fill attenuation for each
/// weight given explicitly as `(weight_lb, attenuation_db)`.
pub fn simulate_fill_table(
    base: &Scenario,
    table: &[(f64, f64)],
    n_readings: usize,
) -> Result<Vec<(f64, ReadingSession)>> {
    base.validate()?;
    check_count(n_readings)?;
    for &(w, a) in table {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::InvalidScenario(format!("invalid fill weight {w}")));
        }
        if !a.is_finite() {
            return Err(Error::InvalidScenario(format!("non-finite fill attenuation {a}")));
        }
    }
    if let Some(pair) = table.windows(2).find(|p| p[1].0 < p[0].0) {
        return Err(Error::UnsortedWeights {
            previous: pair[0].0,
            next: pair[1].0,
        });
    }

    let mut noise = GaussianNoise::new(base.seed);
    table
        .iter()
        .map(|&(w, attenuation_db)| {
            let mut scenario = base.clone();
            if w > 0.0 {
                scenario.contents.push(Content::new(
                    w,
                    MaterialLayer {
                        label: "fill".into(),
                        attenuation_db,
                    },
                ));
            }
            scenario.draw(n_readings, &mut noise).map(|s| (w, s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::summarize;
    use proptest::prelude::*;

    #[test]
    fn noiseless_readings_equal_deterministic_sum() {
        let mut sc = Scenario::default();
        sc.contents.push(Content::new(5.0, MaterialLayer::new("food", 4.0).unwrap()));
        sc.ground_coupling_offset_db = -1.5;
        sc.environment = EnvironmentKind::Outdoor.into();
        let s = simulate_session(&sc, DEFAULT_READINGS).unwrap();
        let want = expected_rssi(&sc.budget, &sc.layers()).unwrap() - 2.0 - 1.5;
        assert_eq!(s.len(), 10);
        assert!(s.values().all(|v| v == want));
        assert_eq!(s.meta.weight_lb, Some(5.0));
        assert_eq!(s.meta.material.as_deref(), Some("food"));
        assert_eq!(s.meta.environment.as_deref(), Some("outdoor"));
    }

    #[test]
    fn same_seed_bitwise_identical() {
        let sc = Scenario {
            noise_sigma_db: 0.8,
            seed: 99,
            ..Scenario::default()
        };
        let a = simulate_session(&sc, 50).unwrap();
        let b = simulate_session(&sc, 50).unwrap();
        let bits = |s: &ReadingSession| s.values().map(f64::to_bits).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let c = simulate_session(&Scenario { seed: 100, ..sc }, 50).unwrap();
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn noise_level_shows_in_std() {
        let sc = Scenario {
            noise_sigma_db: 0.8,
            seed: 2024,
            ..Scenario::default()
        };
        let s = summarize(&simulate_session(&sc, 1000).unwrap()).unwrap();
        assert!((0.7..=0.9).contains(&s.std_dbm), "{}", s.std_dbm);
    }

    #[test]
    fn quantization_rounds_to_step() {
        let sc = Scenario {
            noise_sigma_db: 1.0,
            quantize_step_db: HALF_DB_STEP,
            seed: 5,
            ..Scenario::default()
        };
        let s = simulate_session(&sc, 200).unwrap();
        assert!(s.values().all(|v| (v * 2.0).fract() == 0.0));
    }

    #[test]
    fn invalid_scenarios() {
        let neg_noise = Scenario {
            noise_sigma_db: -0.1,
            ..Scenario::default()
        };
        assert!(matches!(simulate_session(&neg_noise, 10), Err(Error::InvalidScenario(_))));
        assert_eq!(Scenario::default().total_weight_lb().to_bits(), 0f64.to_bits());
        assert!(simulate_session(&Scenario::default(), 0).is_err());
        let mut bad_budget = Scenario::default();
        bad_budget.budget.distance_m = 0.0;
        assert!(simulate_session(&bad_budget, 10).is_err());
    }

    #[test]
    fn single_empty_weight_matches_plain_session() {
        let sc = Scenario {
            noise_sigma_db: 0.6,
            seed: 11,
            attenuation_per_lb_db: 0.4,
            ..Scenario::default()
        };
        let series = simulate_fill_series(&sc, &[0.0], 12).unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].1, simulate_session(&sc, 12).unwrap());
    }

    #[test]
    fn unsorted_weights_rejected() {
        let r = simulate_fill_series(&Scenario::default(), &[0.0, 10.0, 5.0], 10);
        assert!(matches!(r, Err(Error::UnsortedWeights { previous, next }) if previous == 10.0 && next == 5.0));
    }

    #[test]
    fn explicit_table_hits_targets() {
        // ground offset brings the empty bin to -22.036 dBm
        let sc = Scenario {
            ground_coupling_offset_db: -6.0,
            quantize_step_db: HALF_DB_STEP,
            ..Scenario::default()
        };
        let table = [(0.0, 0.0), (17.0, 9.0), (30.8, 11.0), (43.8, 11.0)];
        let series = simulate_fill_table(&sc, &table, 10).unwrap();
        let medians: Vec<f64> = series
            .iter()
            .map(|(_, s)| summarize(s).unwrap().median_dbm)
            .collect();
        assert_eq!(medians, vec![-22.0, -31.0, -33.0, -33.0]);
        assert_eq!(series[2].1.meta.weight_lb, Some(30.8));
    }

    #[test]
    fn default_environment_ordering() {
        let median = |kind: EnvironmentKind| {
            let sc = Scenario {
                environment: kind.into(),
                ..Scenario::default()
            };
            summarize(&simulate_session(&sc, 10).unwrap()).unwrap().median_dbm
        };
        let lab = median(EnvironmentKind::IndoorLab);
        let open = median(EnvironmentKind::IndoorOpen);
        let out = median(EnvironmentKind::Outdoor);
        assert!(lab >= open && open >= out);
    }

    proptest! {
        #[test]
        fn monotone_fill_lowers_medians(
            per_lb in 0.01f64..2.0,
            tenths in proptest::collection::btree_set(0u32..600, 1..8),
        ) {
            let weights: Vec<f64> = tenths.into_iter().map(|t| t as f64 / 10.0).collect();
            let sc = Scenario { attenuation_per_lb_db: per_lb, ..Scenario::default() };
            let series = simulate_fill_series(&sc, &weights, 5).unwrap();
            let medians: Vec<f64> = series.iter().map(|(_, s)| summarize(s).unwrap().median_dbm).collect();
            for w in medians.windows(2) {
                prop_assert!(w[1] < w[0]);
            }
        }
    }
}
