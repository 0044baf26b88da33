//! `(weight, median RSSI)` tables as CSV.
//!
//! Values are written with one decimal, so a table that was written by
//! [`write_points_csv`] reads back to exactly the values it shows.

use std::fmt::Write as _;

use crate::calibration::CalibrationPoint;
use crate::error::LineDiagnostic;
use crate::{Error, Result};

pub const POINTS_CSV_HEADER: &str = "weight_lb,median_rssi_dbm";

pub fn write_points_csv(points: &[CalibrationPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{POINTS_CSV_HEADER}");
    for p in points {
        let _ = writeln!(out, "{:.1},{:.1}", p.weight_lb, p.median_rssi_dbm);
    }
    out
}

pub fn parse_points_csv(text: &str) -> Result<Vec<CalibrationPoint>> {
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            saw_header = true;
            if line != POINTS_CSV_HEADER {
                diagnostics.push(LineDiagnostic {
                    line: idx + 1,
                    message: format!("expected header `{POINTS_CSV_HEADER}`"),
                });
            }
            continue;
        }
        let parsed = line.split_once(',').and_then(|(w, r)| {
            let w = w.trim().parse::<f64>().ok().filter(|v| v.is_finite())?;
            let r = r.trim().parse::<f64>().ok().filter(|v| v.is_finite())?;
            Some(CalibrationPoint::new(w, r))
        });
        match parsed {
            Some(p) => points.push(p),
            None => diagnostics.push(LineDiagnostic {
                line: idx + 1,
                message: format!("expected `<weight_lb>,<median_rssi_dbm>`, got `{line}`"),
            }),
        }
    }
    if diagnostics.is_empty() {
        Ok(points)
    } else {
        Err(Error::Parse(diagnostics))
    }
}
