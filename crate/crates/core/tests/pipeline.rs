use wastesense::calibration::{estimate_weight, fit_interpolating_polynomial, CalibrationPoint};
use wastesense::ingestion::{
    load_profile, parse_session_log, save_profile, write_session_log, CalibrationProfile,
    DeviceConfig,
};
use wastesense::signal_model::MaterialLayer;
use wastesense::simulator::{
    simulate_fill_table, simulate_session, Content, EnvironmentKind, Scenario, HALF_DB_STEP,
};
use wastesense::stats::{material_effect, summarize};

#[test]
fn layer_effect_matches_attenuation() {
    let empty = Scenario::default();
    let mut loaded = empty.clone();
    loaded
        .contents
        .push(Content::new(4.0, MaterialLayer::new("food", 5.0).unwrap()));
    let e = summarize(&simulate_session(&empty, 10).unwrap()).unwrap();
    let m = summarize(&simulate_session(&loaded, 10).unwrap()).unwrap();
    assert!((material_effect(&m, &e) + 5.0).abs() < 1e-12);
}

#[test]
fn lab_multipath_gain_shows_as_positive_effect() {
    let lab = Scenario {
        environment: EnvironmentKind::IndoorLab.into(),
        ..Scenario::default()
    };
    let mut loaded = lab.clone();
    loaded
        .contents
        .push(Content::new(5.6, MaterialLayer::new("food", -1.5).unwrap()));
    let e = summarize(&simulate_session(&lab, 10).unwrap()).unwrap();
    let m = summarize(&simulate_session(&loaded, 10).unwrap()).unwrap();
    assert!(material_effect(&m, &e) > 0.0);
}

#[test]
fn grocery_reconstruction_through_logs_and_profile() {
    let base = Scenario {
        ground_coupling_offset_db: -6.0,
        quantize_step_db: HALF_DB_STEP,
        noise_sigma_db: 0.1,
        seed: 17,
        ..Scenario::default()
    };
    let table = [(0.0, 0.0), (17.0, 9.0), (30.8, 11.0), (43.8, 11.0)];
    let series = simulate_fill_table(&base, &table, 15).unwrap();

    let mut points = Vec::new();
    for (w, session) in &series {
        let parsed = parse_session_log(&write_session_log(session)).unwrap();
        assert_eq!(&parsed, session);
        assert_eq!(parsed.meta.weight_lb, Some(*w));
        points.push(CalibrationPoint::new(*w, summarize(&parsed).unwrap().median_dbm));
    }
    let medians: Vec<f64> = points.iter().map(|p| p.median_rssi_dbm).collect();
    assert_eq!(medians, vec![-22.0, -31.0, -33.0, -33.0]);

    let model = fit_interpolating_polynomial(&points).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grocery.toml");
    let profile = CalibrationProfile {
        model,
        created_at: "2026-10-15T00:00:00Z".into(),
        device: DeviceConfig::default(),
        points,
    };
    save_profile(&profile, &path).unwrap();
    let loaded = load_profile(&path).unwrap();
    assert_eq!(loaded, profile);

    let mut holdout = base.clone();
    holdout
        .contents
        .push(Content::new(10.6, MaterialLayer::new("bag4", 5.0).unwrap()));
    let est = estimate_weight(&loaded.model, &simulate_session(&holdout, 15).unwrap()).unwrap();
    assert_eq!(est.observed_median_dbm, -27.0);
    // real root of the refit cubic at -27 dBm (numpy.polyroots)
    assert!((est.weight_lb - 7.268_693_31).abs() < 1e-6, "{}", est.weight_lb);
}
