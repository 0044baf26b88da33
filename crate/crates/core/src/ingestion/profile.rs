//! Calibration profile files.
//!
//! A profile is a TOML document:
//!
//! ```toml
//! version = 1
//! created_at = "2026-10-15T12:00:00Z"
//! degree = 3
//! coefficients = [-2.2000000000000000e1, -8.2621012633938928e-1, 2.0204929775773664e-2, -1.6154133063891110e-4]
//! weight_range = [0.0000000000000000e0, 4.3799999999999997e1]
//! empty_rssi_dbm = -2.2000000000000000e1
//!
//! [device]
//! tx_power_dbm = 2.0000000000000000e1
//! frequency_hz = 9.1500000000000000e8
//! tx_position = "above"
//!
//! [[points]]
//! weight_lb = 0.0000000000000000e0
//! median_rssi_dbm = -2.2000000000000000e1
//! ```
//!
//! Coefficients are in ascending degree order. Every float is written with 17
//! significant digits so a save/load cycle is bit-exact. Unknown fields are
//! rejected.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::calibration::{fit_interpolating_polynomial, CalibrationModel, CalibrationPoint};
use crate::stats::TxPosition;
use crate::{Error, Result};

pub const PROFILE_VERSION: i64 = 1;

/// Relative tolerance between stored coefficients and a refit of the stored
/// points.
pub const REFIT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub tx_power_dbm: f64,
    pub frequency_hz: f64,
    pub tx_position: TxPosition,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        DeviceConfig {
            tx_power_dbm: 20.0,
            frequency_hz: 915e6,
            tx_position: TxPosition::Above,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationProfile {
    pub model: CalibrationModel,
    pub created_at: String,
    pub device: DeviceConfig,
    pub points: Vec<CalibrationPoint>,
}

impl CalibrationProfile {
    /// Human-readable notes where the stored points no longer reproduce the
    /// stored coefficients.
    pub fn consistency_warnings(&self) -> Vec<String> {
        let refit = match fit_interpolating_polynomial(&self.points) {
            Ok(m) => m,
            Err(e) => return vec![format!("stored points cannot be refit: {e}")],
        };
        let stored = self.model.coefficients();
        if refit.coefficients().len() != stored.len() {
            return vec![format!(
                "stored points refit to degree {}, profile declares degree {}",
                refit.degree(),
                self.model.degree()
            )];
        }
        refit
            .coefficients()
            .iter()
            .zip(stored)
            .enumerate()
            .filter(|(_, (a, b))| {
                (*a - *b).abs() > REFIT_TOLERANCE * a.abs().max(b.abs()).max(1e-12)
            })
            .map(|(k, (a, b))| {
                format!("coefficient c{k} is {b:e} but stored points refit to {a:e}")
            })
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    version: i64,
    created_at: String,
    degree: usize,
    coefficients: Vec<f64>,
    weight_range: [f64; 2],
    empty_rssi_dbm: f64,
    device: DeviceConfig,
    #[serde(default)]
    points: Vec<CalibrationPoint>,
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn float_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| float(x)).collect();
    format!("[{}]", items.join(", "))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn profile_to_string(profile: &CalibrationProfile) -> String {
    let m = &profile.model;
    let (lo, hi) = m.weight_range();
    let mut out = String::new();
    let _ = writeln!(out, "version = {PROFILE_VERSION}");
    let _ = writeln!(out, "created_at = {}", quote(&profile.created_at));
    let _ = writeln!(out, "degree = {}", m.degree());
    let _ = writeln!(out, "coefficients = {}", float_list(m.coefficients()));
    let _ = writeln!(out, "weight_range = {}", float_list(&[lo, hi]));
    let _ = writeln!(out, "empty_rssi_dbm = {}", float(m.empty_rssi_dbm()));
    let _ = writeln!(out);
    let _ = writeln!(out, "[device]");
    let _ = writeln!(out, "tx_power_dbm = {}", float(profile.device.tx_power_dbm));
    let _ = writeln!(out, "frequency_hz = {}", float(profile.device.frequency_hz));
    let _ = writeln!(out, "tx_position = \"{}\"", profile.device.tx_position);
    for p in &profile.points {
        let _ = writeln!(out);
        let _ = writeln!(out, "[[points]]");
        let _ = writeln!(out, "weight_lb = {}", float(p.weight_lb));
        let _ = writeln!(out, "median_rssi_dbm = {}", float(p.median_rssi_dbm));
    }
    out
}

pub fn profile_from_str(text: &str) -> Result<CalibrationProfile> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Profile(e.message().to_string()))?;
    match table.get("version") {
        None => return Err(Error::Profile("missing field `version`".into())),
        Some(toml::Value::Integer(v)) if *v == PROFILE_VERSION => {}
        Some(toml::Value::Integer(v)) => {
            return Err(Error::Version {
                kind: "profile",
                found: *v,
                expected: PROFILE_VERSION,
            })
        }
        Some(_) => return Err(Error::Profile("`version` must be an integer".into())),
    }

    let doc: ProfileDoc = table
        .try_into()
        .map_err(|e: toml::de::Error| Error::Profile(e.message().to_string()))?;
    debug_assert_eq!(doc.version, PROFILE_VERSION);

    if doc.coefficients.len() != doc.degree + 1 {
        return Err(Error::Profile(format!(
            "degree {} needs {} coefficients, found {}",
            doc.degree,
            doc.degree + 1,
            doc.coefficients.len()
        )));
    }
    let model = CalibrationModel::new(doc.coefficients, (doc.weight_range[0], doc.weight_range[1]))
        .map_err(|e| Error::Profile(e.to_string()))?;
    if (model.empty_rssi_dbm() - doc.empty_rssi_dbm).abs() > 1e-9 {
        return Err(Error::Profile(format!(
            "empty_rssi_dbm {} does not match constant coefficient {}",
            doc.empty_rssi_dbm,
            model.empty_rssi_dbm()
        )));
    }
    Ok(CalibrationProfile {
        model,
        created_at: doc.created_at,
        device: doc.device,
        points: doc.points,
    })
}

pub fn save_profile(profile: &CalibrationProfile, path: &Path) -> Result<()> {
    fs::write(path, profile_to_string(profile)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_profile(path: &Path) -> Result<CalibrationProfile> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    profile_from_str(&text)
}
