//! Session statistics, material effect and stability.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Standard deviation at or below which a session counts as stable, dBm.
pub const DEFAULT_STABILITY_THRESHOLD_DBM: f64 = 1.0;

/// Minimum readings per session when recording by hand.
pub const MIN_READINGS_PER_SESSION: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RssiReading {
    pub sequence_index: u64,
    pub rssi_dbm: f64,
}

/// Which transceiver sits on top of the bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TxPosition {
    #[default]
    Above,
    Below,
}

impl fmt::Display for TxPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TxPosition::Above => "above",
            TxPosition::Below => "below",
        })
    }
}

impl FromStr for TxPosition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "above" => Ok(TxPosition::Above),
            "below" => Ok(TxPosition::Below),
            other => Err(format!("tx_position must be `above` or `below`, got `{other}`")),
        }
    }
}

/// Capture metadata for a session.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SessionMeta {
    pub environment: Option<String>,
    pub tx_power_dbm: Option<f64>,
    pub tx_position: Option<TxPosition>,
    pub material: Option<String>,
    pub weight_lb: Option<f64>,
    pub fill_percent: Option<f64>,
    /// Header keys not covered by the fields above, kept verbatim.
    pub extra: BTreeMap<String, String>,
}

/// An ordered run of readings taken under one configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReadingSession {
    pub readings: Vec<RssiReading>,
    pub meta: SessionMeta,
}

impl ReadingSession {
    /// Builds a session from bare values, numbering them from zero.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let readings = values
            .into_iter()
            .enumerate()
            .map(|(i, rssi_dbm)| RssiReading {
                sequence_index: i as u64,
                rssi_dbm,
            })
            .collect();
        ReadingSession {
            readings,
            meta: SessionMeta::default(),
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.readings.iter().map(|r| r.rssi_dbm)
    }

    pub fn len(&self) -> usize {
        self.readings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.readings.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionSummary {
    pub n: usize,
    pub mean_dbm: f64,
    pub median_dbm: f64,
    /// Sample standard deviation (n - 1 divisor), 0 for a single reading.
    pub std_dbm: f64,
    pub min_dbm: f64,
    pub max_dbm: f64,
}

pub fn summarize(session: &ReadingSession) -> Result<SessionSummary> {
    summarize_values(&session.values().collect::<Vec<_>>())
}

/// Summary of raw values. Order does not matter.
pub fn summarize_values(values: &[f64]) -> Result<SessionSummary> {
    if values.is_empty() {
        return Err(Error::EmptySession);
    }

    // Welford keeps the variance exactly zero for constant input.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
        min = min.min(x);
        max = max.max(x);
    }
    let n = values.len();
    let std = if n > 1 {
        (m2.max(0.0) / (n - 1) as f64).sqrt()
    } else {
        0.0
    };

    Ok(SessionSummary {
        n,
        mean_dbm: mean,
        median_dbm: median(values),
        std_dbm: std,
        min_dbm: min,
        max_dbm: max,
    })
}

fn median(values: &[f64]) -> f64 {
    let mut buf = values.to_vec();
    let mid = buf.len() / 2;
    let (lower, upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if values.len() % 2 == 1 {
        upper
    } else {
        let lower = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lower + upper) / 2.0
    }
}

/// Median shift caused by a load: `material.median - empty.median`.
///
/// Negative values are attenuation; positive values mean the load made the
/// link stronger.
pub fn material_effect(material: &SessionSummary, empty: &SessionSummary) -> f64 {
    material.median_dbm - empty.median_dbm
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stability {
    Stable,
    Unstable { std_dbm: f64 },
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable)
    }
}

pub fn stability_check(summary: &SessionSummary, threshold_dbm: f64) -> Result<Stability> {
    if !(threshold_dbm > 0.0) {
        return Err(Error::Domain(format!(
            "stability threshold must be positive, got {threshold_dbm}"
        )));
    }
    Ok(if summary.std_dbm <= threshold_dbm {
        Stability::Stable
    } else {
        Stability::Unstable {
            std_dbm: summary.std_dbm,
        }
    })
}
