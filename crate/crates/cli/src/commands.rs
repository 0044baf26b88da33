use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{SecondsFormat, Utc};

use wastesense::calibration::{
    fit_interpolating_polynomial, invert_for_weight, relative_error_percent, CalibrationPoint,
};
use wastesense::error::LineDiagnostic;
use wastesense::ingestion::{
    load_profile, parse_session_log, profile_to_string, write_points_csv, write_session_log,
    CalibrationProfile, DeviceConfig,
};
use wastesense::signal_model::{expected_rssi, free_space_path_loss, LinkBudget};
use wastesense::simulator::{load_scenario, simulate_session};
use wastesense::stats::{material_effect, stability_check, summarize, ReadingSession};
use wastesense::Error;

use crate::chart::render_chart;
use crate::{CalibrateArgs, CliError, EstimateArgs, LinkbudgetArgs, ReportArgs, SimulateArgs, StatsArgs};

type CliResult = Result<(), CliError>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Reads and parses every file, reporting all failures before giving up.
fn read_sessions(paths: &[&Path]) -> Result<Vec<ReadingSession>, CliError> {
    let mut sessions = Vec::with_capacity(paths.len());
    let mut failed = 0;
    for path in paths {
        let parsed = fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))
            .and_then(|text| parse_session_log(&text).map_err(|e| describe(path, e)));
        match parsed {
            Ok(s) => sessions.push(s),
            Err(msg) => {
                eprintln!("{msg}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Data(format!("{failed} session file(s) could not be read")));
    }
    Ok(sessions)
}

fn describe(path: &Path, e: Error) -> String {
    match e {
        Error::Parse(diags) => diags
            .iter()
            .map(|LineDiagnostic { line, message }| format!("{}:{line}: {message}", path.display()))
            .collect::<Vec<_>>()
            .join("\n"),
        other => format!("{}: {other}", path.display()),
    }
}

/// Writes through a temporary file in the destination directory so a failed
/// run never leaves a partial file behind.
fn write_atomic(path: &Path, contents: &str) -> CliResult {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Data(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn linkbudget(args: &LinkbudgetArgs) -> CliResult {
    let budget = LinkBudget {
        tx_power_dbm: args.power,
        tx_antenna_gain_dbi: args.ant_gain,
        rx_antenna_gain_dbi: args.ant_gain,
        system_gain_db: args.sys_gain,
        frequency_hz: args.freq,
        distance_m: args.dist,
    };
    let usage = |e: Error| CliError::Usage(e.to_string());
    let fspl = free_space_path_loss(budget.distance_m, budget.frequency_hz).map_err(usage)?;
    let rssi = expected_rssi(&budget, &[]).map_err(usage)?;
    let violations = budget.device_violations();

    println!("tx power              {:>8.2} dBm", budget.tx_power_dbm);
    println!("tx antenna gain       {:>8.2} dBi", budget.tx_antenna_gain_dbi);
    println!("rx antenna gain       {:>8.2} dBi", budget.rx_antenna_gain_dbi);
    println!("system gain           {:>8.2} dB", budget.system_gain_db);
    println!("frequency             {:>8.2} MHz", budget.frequency_hz / 1e6);
    println!("distance              {:>8.3} m", budget.distance_m);
    println!("free-space path loss  {:>8.1} dB", fspl);
    println!("expected RSSI         {:>8.1} dBm", rssi);
    if violations.is_empty() {
        println!("device limits         ok");
    } else {
        for v in &violations {
            println!("device limits         VIOLATION: {v}");
            eprintln!("warning: {v}");
        }
    }
    Ok(())
}

pub fn stats(args: &StatsArgs) -> CliResult {
    if !(args.threshold > 0.0) {
        return Err(CliError::Usage(format!(
            "--threshold must be positive, got {}",
            args.threshold
        )));
    }
    let mut paths: Vec<&Path> = args.files.iter().map(|p| p.as_path()).collect();
    if let Some(e) = &args.empty {
        paths.push(e);
    }
    let mut sessions = read_sessions(&paths)?;
    let baseline = match &args.empty {
        Some(_) => Some(summarize(&sessions.pop().expect("baseline parsed"))?),
        None => None,
    };

    let names: Vec<String> = args.files.iter().map(|p| p.display().to_string()).collect();
    let width = names.iter().map(String::len).max().unwrap_or(0).max(4);
    let mut header = format!(
        "{:<width$}  {:>5}  {:>7}  {:>7}  {:>5}  {:<6}",
        "file", "n", "mean", "median", "std", "stable"
    );
    if baseline.is_some() {
        header.push_str(&format!("  {:>6}", "effect"));
    }
    println!("{}", header.trim_end());
    for (name, session) in names.iter().zip(&sessions) {
        let s = summarize(session)?;
        let stable = stability_check(&s, args.threshold)?.is_stable();
        let mut row = format!(
            "{name:<width$}  {:>5}  {:>7.1}  {:>7.1}  {:>5.1}  {:<6}",
            s.n,
            s.mean_dbm,
            s.median_dbm,
            s.std_dbm,
            yes_no(stable)
        );
        if let Some(b) = &baseline {
            row.push_str(&format!("  {:>6.1}", material_effect(&s, b)));
        }
        println!("{}", row.trim_end());
    }
    if let (Some(path), Some(b)) = (&args.empty, &baseline) {
        println!("baseline {}: median {:.1} dBm", path.display(), b.median_dbm);
    }
    Ok(())
}

pub fn calibrate(args: &CalibrateArgs) -> CliResult {
    if !(args.freq > 0.0 && args.freq.is_finite()) {
        return Err(CliError::Usage(format!("--freq must be positive, got {}", args.freq)));
    }
    let paths: Vec<&Path> = args.files.iter().map(|p| p.as_path()).collect();
    let sessions = read_sessions(&paths)?;

    let mut points = Vec::with_capacity(sessions.len());
    for (path, session) in args.files.iter().zip(&sessions) {
        let weight = session.meta.weight_lb.ok_or_else(|| {
            CliError::Data(format!("{}: missing `# weight_lb = ...` header", path.display()))
        })?;
        points.push(CalibrationPoint::new(weight, summarize(session)?.median_dbm));
    }
    let model = fit_interpolating_polynomial(&points)?;

    let first = &sessions[0].meta;
    let profile = CalibrationProfile {
        model,
        created_at: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        device: DeviceConfig {
            tx_power_dbm: first.tx_power_dbm.unwrap_or(DeviceConfig::default().tx_power_dbm),
            frequency_hz: args.freq,
            tx_position: first.tx_position.unwrap_or_default(),
        },
        points,
    };
    write_atomic(&args.out, &profile_to_string(&profile))?;

    let mut sorted = profile.points.clone();
    sorted.sort_by(|a, b| a.weight_lb.total_cmp(&b.weight_lb));
    println!("calibration points");
    println!("  {:>9}  {:>15}", "weight_lb", "median_rssi_dbm");
    for p in &sorted {
        println!("  {:>9.1}  {:>15.1}", p.weight_lb, p.median_rssi_dbm);
    }
    let m = &profile.model;
    let (lo, hi) = m.weight_range();
    println!("model degree {} on {lo:.1}-{hi:.1} lb", m.degree());
    for (k, c) in m.coefficients().iter().enumerate() {
        println!("  c{k} = {c:>14.6e}");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn load_profile_checked(path: &Path) -> Result<CalibrationProfile, CliError> {
    let profile = load_profile(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    for w in profile.consistency_warnings() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(profile)
}

pub fn estimate(args: &EstimateArgs) -> CliResult {
    if let Some(a) = args.actual {
        if !(a > 0.0 && a.is_finite()) {
            return Err(CliError::Usage(format!("--actual must be positive, got {a}")));
        }
    }
    let profile = load_profile_checked(&args.profile)?;
    let session = read_sessions(&[args.session.as_path()])?.remove(0);
    let median = summarize(&session)?.median_dbm;
    let est = invert_for_weight(&profile.model, median);

    println!("observed median   {:>7.1} dBm", est.observed_median_dbm);
    println!("estimated weight  {:>7.1} lb", est.weight_lb);
    println!("extrapolated      {:>7}", yes_no(est.extrapolated));
    let roots: Vec<String> = est.all_roots_in_range.iter().map(|r| format!("{r:.1}")).collect();
    println!(
        "roots in range    {:>7}",
        if roots.is_empty() { "none".to_string() } else { roots.join(" ") }
    );
    if let Some(actual) = args.actual {
        let err = relative_error_percent(est.weight_lb, actual)?;
        println!("actual weight     {actual:>7.1} lb");
        println!("relative error    {err:>7.1} %");
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> CliResult {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let scenario = load_scenario(&args.scenario)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.scenario.display())))?;
    let session = simulate_session(&scenario, args.n)?;
    let summary = summarize(&session)?;
    write_atomic(&args.out, &write_session_log(&session))?;
    println!(
        "simulated {} readings, median {:.1} dBm -> {}",
        summary.n,
        summary.median_dbm,
        args.out.display()
    );
    Ok(())
}

pub fn report(args: &ReportArgs) -> CliResult {
    let profile = load_profile_checked(&args.profile)?;
    let paths: Vec<&Path> = args.files.iter().map(|p| p.as_path()).collect();
    let sessions = read_sessions(&paths)?;

    let mut observed = Vec::with_capacity(sessions.len());
    for session in &sessions {
        let median = summarize(session)?.median_dbm;
        let weight = match session.meta.weight_lb {
            Some(w) => w,
            None => invert_for_weight(&profile.model, median).weight_lb,
        };
        observed.push(CalibrationPoint::new(weight, median));
    }
    print!("{}", write_points_csv(&observed));
    println!();
    print!("{}", render_chart(&profile.model, &observed));
    Ok(())
}
