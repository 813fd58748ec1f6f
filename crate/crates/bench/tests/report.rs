use std::fs;

use qlinbench::config::{ExperimentConfig, Suite};
use qlinbench::hhl_suite::run_hhl_suite;
use qlinbench::report::{emit_reports, BenchReport, Format};

#[test]
fn three_rows_give_three_data_lines() {
    let cfg = ExperimentConfig {
        suites: vec![Suite::HhlDensity],
        dims: vec![2],
        densities: vec![0.5, 0.75, 1.0],
        trials_per_cell: 1,
        ..Default::default()
    };
    let (rows, _) = run_hhl_suite(&cfg);
    let mut report = BenchReport::new(cfg);
    report.hhl_rows = rows;
    let dir = tempfile::tempdir().unwrap();
    emit_reports(&report, dir.path(), &[Format::Csv]).unwrap();
    let text = fs::read_to_string(dir.path().join("hhl.csv")).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn same_report_emitted_twice_is_identical() {
    let cfg = ExperimentConfig { dims: vec![2], trials_per_cell: 1, seeds: 1, shots_list: vec![2], ..Default::default() };
    let cfg = ExperimentConfig { suites: vec![Suite::HhlDiag, Suite::HhlDensity], ..cfg };
    let report = qlinbench::run(&cfg).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let pa = emit_reports(&report, a.path(), &[Format::Csv, Format::Json, Format::Plots]).unwrap();
    let pb = emit_reports(&report, b.path(), &[Format::Csv, Format::Json, Format::Plots]).unwrap();
    assert_eq!(pa.len(), pb.len());
    for (x, y) in pa.iter().zip(&pb) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
    }
    let json: serde_json::Value = serde_json::from_slice(&fs::read(a.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["hhl_rows"].as_array().unwrap().len(), 2 + 6);
    assert!(json["versions"]["qlin_core"].is_string());
    assert!(json.get("timings").is_none());
}
