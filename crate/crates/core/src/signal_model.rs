//! Link-budget arithmetic: free-space path loss, expected received strength
//! and additive material attenuation.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Transmit power range supported by the transceiver, dBm.
pub const DEVICE_POWER_RANGE_DBM: (f64, f64) = (1.0, 20.0);

/// Carrier frequency range supported by the transceiver, Hz.
pub const DEVICE_FREQUENCY_RANGE_HZ: (f64, f64) = (433e6, 915e6);

/// Gain of the 915 MHz spring antenna, dBi.
pub const SPRING_ANTENNA_GAIN_DBI: f64 = 2.15;

/// Everything between the transmitter output and the receiver input.
///
/// Antenna gains are kept apart from `system_gain_db`: the system gain covers
/// the remaining losses (cables, connectors, mismatch) and is negative for a
/// net loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub tx_antenna_gain_dbi: f64,
    pub rx_antenna_gain_dbi: f64,
    pub system_gain_db: f64,
    pub frequency_hz: f64,
    pub distance_m: f64,
}

impl LinkBudget {
    /// Transceivers at 20 dBm and 915 MHz with spring antennas, 5 ft apart,
    /// with a -5 dB system gain.
    pub fn trash_bin_default() -> Self {
        LinkBudget {
            tx_power_dbm: 20.0,
            tx_antenna_gain_dbi: SPRING_ANTENNA_GAIN_DBI,
            rx_antenna_gain_dbi: SPRING_ANTENNA_GAIN_DBI,
            system_gain_db: -5.0,
            frequency_hz: 915e6,
            distance_m: 1.524,
        }
    }

    pub fn path_loss_db(&self) -> Result<f64> {
        free_space_path_loss(self.distance_m, self.frequency_hz)
    }

    /// Checks the budget against the transceiver's power and frequency limits.
    pub fn device_violations(&self) -> Vec<DeviceViolation> {
        validate_device_config(self.tx_power_dbm, self.frequency_hz)
    }
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self::trash_bin_default()
    }
}

/// A slab of material between the antennas.
///
/// Attenuation may be negative: a load placed in a reflective environment can
/// raise the received strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialLayer {
    pub label: String,
    pub attenuation_db: f64,
}

impl MaterialLayer {
    pub fn new(label: impl Into<String>, attenuation_db: f64) -> Result<Self> {
        if !attenuation_db.is_finite() {
            return Err(Error::Domain(format!(
                "attenuation must be finite, got {attenuation_db}"
            )));
        }
        Ok(MaterialLayer {
            label: label.into(),
            attenuation_db,
        })
    }
}

/// Free-space path loss in dB: `20 log10(d) + 20 log10(f) + 20 log10(4π/c)`.
pub fn free_space_path_loss(distance_m: f64, frequency_hz: f64) -> Result<f64> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::Domain(format!(
            "distance must be positive, got {distance_m} m"
        )));
    }
    if !(frequency_hz > 0.0 && frequency_hz.is_finite()) {
        return Err(Error::Domain(format!(
            "frequency must be positive, got {frequency_hz} Hz"
        )));
    }
    Ok(20.0 * distance_m.log10()
        + 20.0 * frequency_hz.log10()
        + 20.0 * (4.0 * PI / SPEED_OF_LIGHT).log10())
}

/// Received strength predicted by the budget after path loss and every
/// material layer.
pub fn expected_rssi(budget: &LinkBudget, layers: &[MaterialLayer]) -> Result<f64> {
    let fspl = budget.path_loss_db()?;
    let material: f64 = layers.iter().map(|l| l.attenuation_db).sum();
    Ok(budget.tx_power_dbm
        + budget.tx_antenna_gain_dbi
        + budget.rx_antenna_gain_dbi
        + budget.system_gain_db
        - fspl
        - material)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeviceViolation {
    TxPower { dbm: f64 },
    Frequency { hz: f64 },
}

impl fmt::Display for DeviceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DeviceViolation::TxPower { dbm } => write!(
                f,
                "tx power {dbm:.1} dBm outside device range {:.0}-{:.0} dBm",
                DEVICE_POWER_RANGE_DBM.0, DEVICE_POWER_RANGE_DBM.1
            ),
            DeviceViolation::Frequency { hz } => write!(
                f,
                "frequency {:.1} MHz outside device range {:.0}-{:.0} MHz",
                hz / 1e6,
                DEVICE_FREQUENCY_RANGE_HZ.0 / 1e6,
                DEVICE_FREQUENCY_RANGE_HZ.1 / 1e6
            ),
        }
    }
}

/// Reports every transceiver limit the configuration violates. An empty list
/// means the configuration is within limits.
///
/// This is advisory; the path-loss math accepts any positive inputs.
pub fn validate_device_config(tx_power_dbm: f64, frequency_hz: f64) -> Vec<DeviceViolation> {
    let mut out = Vec::new();
    let (pmin, pmax) = DEVICE_POWER_RANGE_DBM;
    if !(pmin..=pmax).contains(&tx_power_dbm) {
        out.push(DeviceViolation::TxPower { dbm: tx_power_dbm });
    }
    let (fmin, fmax) = DEVICE_FREQUENCY_RANGE_HZ;
    if !(fmin..=fmax).contains(&frequency_hz) {
        out.push(DeviceViolation::Frequency { hz: frequency_hz });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Reference values evaluated with 40-digit arithmetic.
    const FSPL_5FT_915MHZ: f64 = 35.335_904_443_283_973;
    const FSPL_10FT_915MHZ: f64 = 41.356_504_356_563_597;
    const FSPL_1M_1GHZ: f64 = 32.447_783_221_883_374;

    #[test]
    fn path_loss_reference_points() {
        let a = free_space_path_loss(1.524, 915e6).unwrap();
        assert!((a - FSPL_5FT_915MHZ).abs() < 1e-9, "{a}");
        assert!((a - 35.3).abs() < 0.1);

        let b = free_space_path_loss(3.048, 915e6).unwrap();
        assert!((b - FSPL_10FT_915MHZ).abs() < 1e-9, "{b}");
        assert!((b - a - 20.0 * 2f64.log10()).abs() < 1e-9);

        let c = free_space_path_loss(1.0, 1e9).unwrap();
        assert!((c - FSPL_1M_1GHZ).abs() < 1e-9, "{c}");
    }

    #[test]
    fn path_loss_rejects_non_positive_inputs() {
        for (d, f) in [(0.0, 915e6), (-1.0, 915e6), (1.0, 0.0), (1.0, -5.0), (f64::NAN, 1e9)] {
            assert!(matches!(free_space_path_loss(d, f), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn default_budget_predicts_minus_16() {
        let rssi = expected_rssi(&LinkBudget::trash_bin_default(), &[]).unwrap();
        assert!((rssi - (-16.035_904_443_283_976)).abs() < 1e-9, "{rssi}");
        assert!((rssi + 16.0).abs() < 0.1);
    }

    #[test]
    fn zero_gains_give_negative_path_loss() {
        let budget = LinkBudget {
            tx_power_dbm: 0.0,
            tx_antenna_gain_dbi: 0.0,
            rx_antenna_gain_dbi: 0.0,
            system_gain_db: 0.0,
            frequency_hz: 868e6,
            distance_m: 2.5,
        };
        let fspl = free_space_path_loss(2.5, 868e6).unwrap();
        assert_eq!(expected_rssi(&budget, &[]).unwrap(), -fspl);
    }

    #[test]
    fn one_layer_lowers_by_its_attenuation() {
        let budget = LinkBudget::default();
        let bare = expected_rssi(&budget, &[]).unwrap();
        let layer = MaterialLayer::new("food", 5.0).unwrap();
        let loaded = expected_rssi(&budget, &[layer]).unwrap();
        assert!((bare - loaded - 5.0).abs() < 1e-12);
    }

    #[test]
    fn expected_rssi_propagates_domain_errors() {
        let budget = LinkBudget {
            distance_m: 0.0,
            ..LinkBudget::default()
        };
        assert!(expected_rssi(&budget, &[]).is_err());
    }

    #[test]
    fn layer_must_be_finite() {
        assert!(MaterialLayer::new("x", f64::INFINITY).is_err());
        assert!(MaterialLayer::new("lab wall", -3.0).is_ok());
    }

    #[test]
    fn device_limits() {
        assert!(validate_device_config(20.0, 915e6).is_empty());
        assert!(validate_device_config(1.0, 433e6).is_empty());
        assert_eq!(
            validate_device_config(21.0, 915e6),
            vec![DeviceViolation::TxPower { dbm: 21.0 }]
        );
        assert_eq!(
            validate_device_config(10.0, 2.4e9),
            vec![DeviceViolation::Frequency { hz: 2.4e9 }]
        );
        assert_eq!(validate_device_config(0.0, 100e6).len(), 2);
    }

    proptest! {
        #[test]
        fn path_loss_monotone(d in 0.01f64..1e4, f in 1e6f64..1e10, k in 1.0001f64..100.0) {
            let base = free_space_path_loss(d, f).unwrap();
            prop_assert!(free_space_path_loss(d * k, f).unwrap() > base);
            prop_assert!(free_space_path_loss(d, f * k).unwrap() > base);
        }

        #[test]
        fn path_loss_scaling_law(d in 0.01f64..1e3, f in 1e6f64..1e10, k in 1e-3f64..1e3) {
            let diff = free_space_path_loss(k * d, f).unwrap() - free_space_path_loss(d, f).unwrap();
            prop_assert!((diff - 20.0 * k.log10()).abs() < 1e-9);
        }

        #[test]
        fn tx_power_shifts_rssi_linearly(p in -10f64..30.0, delta in -20f64..20.0) {
            let a = LinkBudget { tx_power_dbm: p, ..LinkBudget::default() };
            let b = LinkBudget { tx_power_dbm: p + delta, ..a };
            let diff = expected_rssi(&b, &[]).unwrap() - expected_rssi(&a, &[]).unwrap();
            prop_assert!((diff - delta).abs() < 1e-9);
        }

        #[test]
        fn layer_order_irrelevant(atts in proptest::collection::vec(-10f64..30.0, 0..8)) {
            let layers: Vec<_> = atts
                .iter()
                .enumerate()
                .map(|(i, a)| MaterialLayer::new(format!("l{i}"), *a).unwrap())
                .collect();
            let mut reversed = layers.clone();
            reversed.reverse();
            let mut rotated = layers.clone();
            if !rotated.is_empty() {
                rotated.rotate_left(1);
            }
            let budget = LinkBudget::default();
            let base = expected_rssi(&budget, &layers).unwrap();
            prop_assert!((expected_rssi(&budget, &reversed).unwrap() - base).abs() < 1e-9);
            prop_assert!((expected_rssi(&budget, &rotated).unwrap() - base).abs() < 1e-9);
        }
    }
}
