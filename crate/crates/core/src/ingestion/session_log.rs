//! Session log text format.
//!
//! ```text
//! # environment = indoor_open
//! # weight_lb = 17
//! RSSI: -31
//! RSSI: -31.5
//! 7,-32
//! ```
//!
//! Header lines are `# key = value`. Body lines are either serial-monitor
//! style `RSSI: <dBm>` or CSV `<sequence>,<dBm>`. Blank lines are ignored and
//! both LF and CRLF endings are accepted. Any other line rejects the file.

use std::fmt::Write as _;

use crate::error::LineDiagnostic;
use crate::stats::{ReadingSession, RssiReading, SessionMeta, TxPosition};
use crate::{Error, Result};

const RSSI_PREFIX: &str = "RSSI:";

/// Parses a session log, collecting a diagnostic for every malformed line.
pub fn parse_session_log(text: &str) -> Result<ReadingSession> {
    let mut session = ReadingSession::default();
    let mut diagnostics = Vec::new();
    let mut seen_keys: Vec<String> = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut fail = |message: String| {
            diagnostics.push(LineDiagnostic {
                line: line_no,
                message,
            })
        };

        if let Some(header) = line.strip_prefix('#') {
            match parse_header(header) {
                Ok((key, value)) => {
                    if seen_keys.iter().any(|k| k == key) {
                        fail(format!("duplicate header key `{key}`"));
                    } else if let Err(msg) = apply_header(&mut session.meta, key, value) {
                        fail(msg);
                    } else {
                        seen_keys.push(key.to_string());
                    }
                }
                Err(msg) => fail(msg),
            }
            continue;
        }

        let next_index = session.readings.last().map_or(0, |r| r.sequence_index + 1);
        let reading = if let Some(value) = line.strip_prefix(RSSI_PREFIX) {
            parse_rssi(value.trim()).map(|rssi_dbm| RssiReading {
                sequence_index: next_index,
                rssi_dbm,
            })
        } else if let Some((seq, value)) = line.split_once(',') {
            parse_csv_reading(seq.trim(), value.trim(), next_index)
        } else {
            Err(format!("unrecognized line `{line}`"))
        };
        match reading {
            Ok(r) => session.readings.push(r),
            Err(msg) => fail(msg),
        }
    }

    if !diagnostics.is_empty() {
        return Err(Error::Parse(diagnostics));
    }
    if session.readings.is_empty() {
        return Err(Error::EmptySession);
    }
    Ok(session)
}

fn parse_header(header: &str) -> std::result::Result<(&str, &str), String> {
    let (key, value) = header
        .split_once('=')
        .ok_or_else(|| format!("header `#{header}` is not of the form `# key = value`"))?;
    let key = key.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return Err(format!("invalid header key `{key}`"));
    }
    Ok((key, value.trim()))
}

fn apply_header(meta: &mut SessionMeta, key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "environment" => meta.environment = Some(value.to_string()),
        "material" => meta.material = Some(value.to_string()),
        "tx_position" => meta.tx_position = Some(value.parse::<TxPosition>()?),
        "tx_power_dbm" => meta.tx_power_dbm = Some(parse_finite(key, value)?),
        "weight_lb" => {
            let w = parse_finite(key, value)?;
            if w < 0.0 {
                return Err(format!("weight_lb must be non-negative, got {value}"));
            }
            meta.weight_lb = Some(w);
        }
        "fill_percent" => {
            let p = parse_finite(key, value)?;
            if !(0.0..=100.0).contains(&p) {
                return Err(format!("fill_percent must be within 0-100, got {value}"));
            }
            meta.fill_percent = Some(p);
        }
        _ => {
            meta.extra.insert(key.to_string(), value.to_string());
        }
    }
    Ok(())
}

fn parse_finite(key: &str, value: &str) -> std::result::Result<f64, String> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("{key} must be a finite number, got `{value}`")),
    }
}

fn parse_rssi(value: &str) -> std::result::Result<f64, String> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("invalid RSSI value `{value}`")),
    }
}

fn parse_csv_reading(
    seq: &str,
    value: &str,
    min_index: u64,
) -> std::result::Result<RssiReading, String> {
    let sequence_index = seq
        .parse::<u64>()
        .map_err(|_| format!("invalid sequence index `{seq}`"))?;
    if sequence_index < min_index {
        return Err(format!(
            "sequence index {sequence_index} does not increase (expected at least {min_index})"
        ));
    }
    Ok(RssiReading {
        sequence_index,
        rssi_dbm: parse_rssi(value)?,
    })
}

/// Renders a session in the log format accepted by [`parse_session_log`].
///
/// Values use the shortest text that reads back to the same `f64`. Readings
/// numbered `0, 1, 2, ...` are written as `RSSI:` lines, anything else as CSV.
pub fn write_session_log(session: &ReadingSession) -> String {
    let mut out = String::new();
    let meta = &session.meta;
    let mut header = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            let _ = writeln!(out, "# {key} = {v}");
        }
    };
    header("environment", meta.environment.clone());
    header("material", meta.material.clone());
    header("weight_lb", meta.weight_lb.map(|v| v.to_string()));
    header("fill_percent", meta.fill_percent.map(|v| v.to_string()));
    header("tx_power_dbm", meta.tx_power_dbm.map(|v| v.to_string()));
    header("tx_position", meta.tx_position.map(|v| v.to_string()));
    for (k, v) in &meta.extra {
        header(k, Some(v.clone()));
    }

    let contiguous = session
        .readings
        .iter()
        .enumerate()
        .all(|(i, r)| r.sequence_index == i as u64);
    for r in &session.readings {
        if contiguous {
            let _ = writeln!(out, "{RSSI_PREFIX} {}", r.rssi_dbm);
        } else {
            let _ = writeln!(out, "{},{}", r.sequence_index, r.rssi_dbm);
        }
    }
    out
}
