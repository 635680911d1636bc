mod common;

use gendrv_core::bench::{
    emit_csv, emit_json, read_json, run_sweep, run_sweep_sequential, summarize, write_csv, SweepRecord, SweepSpec,
    SCHEMA,
};
use gendrv_core::solvers::{Method, Status};
use gendrv_core::Error;

fn csv_bytes(records: &[SweepRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).unwrap();
    buf
}

#[test]
fn quartic_root_sweep_recovers_both_roots() {
    let records = run_sweep(&SweepSpec::default_roots(vec![Method::LNR, Method::CNR])).unwrap();
    assert_eq!(records.len(), 62);
    for r in &records {
        assert_eq!(r.status, Status::Converged, "{r:?}");
        assert!((r.x_star - 1.0).abs() < 1e-3 || (r.x_star - 10.0).abs() < 1e-3, "{r:?}");
    }
}

#[test]
fn q_g_sweep_lands_on_critical_points() {
    let dy = |x: f64| 4.0 * x.powi(3) - 63.0 * x * x + 298.0 * x - 419.0;
    let critical: Vec<f64> =
        [(2.0, 3.0), (4.0, 6.0), (8.0, 9.0)].iter().map(|&(lo, hi)| common::bisect(dy, lo, hi, 1e-12)).collect();
    let spec = SweepSpec { x0_start: 2.0, x0_end: 9.0, x0_count: 15, ..SweepSpec::default_extrema(vec![Method::QG]) };
    for r in run_sweep(&spec).unwrap().iter().filter(|r| r.status == Status::Converged) {
        assert!(critical.iter().any(|c| (r.x_star - c).abs() < 1e-2), "{r:?}");
    }
}

#[test]
fn csv_is_deterministic_and_parallel_matches_sequential() {
    let spec = SweepSpec {
        x0_count: 57,
        ..SweepSpec::default_roots(vec![Method::QG, Method::LNR, Method::CNR, Method::QNR, Method::LG])
    };
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    let seq = run_sweep_sequential(&spec).unwrap();
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    assert_eq!(a, seq);
    let order: Vec<(Method, f64)> = a.iter().map(|r| (r.method, r.x0)).collect();
    let mut sorted = order.clone();
    sorted.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    assert_eq!(order, sorted);
}

#[test]
fn summarize_agrees_with_streaming_pass() {
    let spec = SweepSpec::default_roots(vec![Method::LNR, Method::CNR, Method::QNR]);
    let records = run_sweep(&spec).unwrap();
    for s in summarize(&records) {
        // Welford
        let (mut n, mut mean, mut m2, mut max) = (0usize, 0.0f64, 0.0f64, 0usize);
        for r in records.iter().filter(|r| r.method == s.method && r.status == Status::Converged) {
            n += 1;
            let v = r.iterations as f64;
            let d = v - mean;
            mean += d / n as f64;
            m2 += d * (v - mean);
            max = max.max(r.iterations);
        }
        assert_eq!(s.n_converged, n);
        if n == 0 {
            assert!(s.mean_iter.is_none());
            continue;
        }
        assert!((s.mean_iter.unwrap() - mean).abs() <= 1e-12 * mean);
        assert!((s.std_iter_population.unwrap() - (m2 / n as f64).sqrt()).abs() <= 1e-12 * (1.0 + mean));
        if n > 1 {
            assert!((s.std_iter_sample.unwrap() - (m2 / (n - 1) as f64).sqrt()).abs() <= 1e-12 * (1.0 + mean));
        }
        assert_eq!(s.max_iter_observed, Some(max));
        assert_eq!(s.distinct_limits.iter().map(|c| c.count).sum::<usize>(), n);
    }
}

#[test]
fn json_round_trip_reproduces_stats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    // L-G at the default step never converges: exercises null statistics too
    let spec = SweepSpec::default_extrema(vec![Method::QG, Method::LG, Method::QNR]);
    let records = run_sweep(&spec).unwrap();
    let stats = summarize(&records);
    emit_json(&records, &stats, &spec, &path).unwrap();

    let report = read_json(&path).unwrap();
    assert_eq!(report.schema, SCHEMA);
    assert_eq!(report.spec_echo, spec);
    assert_eq!(summarize(&report.records), stats);
    assert_eq!(report.stats, stats);

    let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(raw["schema"], "gendrv-sweep-v1");
    assert!(raw["records"].is_array() && raw["stats"].is_array() && raw["spec_echo"].is_object());
}

#[test]
fn one_record_csv_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let spec = SweepSpec { x0_count: 1, ..SweepSpec::default_roots(vec![Method::CNR]) };
    let records = run_sweep(&spec).unwrap();
    emit_csv(&records, &path).unwrap();

    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(!text.contains('\r'));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["method", "x0", "status", "x_star", "y_star", "iterations"]);
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "c-nr");
    assert_eq!(row[1].parse::<f64>().unwrap(), -2.0);
    assert_eq!(&row[2], "Converged");
    assert!((row[3].parse::<f64>().unwrap() - records[0].x_star).abs() <= 1e-11);
    assert_eq!(row[5].parse::<usize>().unwrap(), records[0].iterations);
}

#[test]
fn io_failures_name_the_path() {
    let bad = std::path::Path::new("/nonexistent-dir/out.csv");
    match emit_csv(&[], bad) {
        Err(e @ Error::Io { .. }) => assert!(e.to_string().contains("/nonexistent-dir/out.csv")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn solver_failures_become_records() {
    let spec = SweepSpec {
        function: "x^2 + 1".into(),
        x0_count: 5,
        ..SweepSpec::default_roots(vec![Method::QNR, Method::LNR])
    };
    let records = run_sweep(&spec).unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().filter(|r| r.method == Method::QNR).all(|r| r.status == Status::NoRealRoot));
}
