use std::process::{Command, Output};

use serde_json::Value;

fn sine_gas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sine-gas"))
        .args(args)
        .env_remove("SINE_GAS_CONFIG")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data_rows(csv_text: &[u8]) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(csv_text)
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn det_at_zero_coupling_is_zero() {
    let out = sine_gas(&["det", "--s", "1", "--gamma", "0"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["log_det"].as_f64(), Some(0.0));
    assert_eq!(v["method"], "nystrom");
}

#[test]
fn det_gap_regime_near_classical_expansion() {
    let v = json_of(&sine_gas(&["det", "--s", "5", "--gamma", "1"]));
    let expected = -12.5 - 0.25 * 5f64.ln() - 0.438_501_166_054_690_7;
    assert!((v["log_det"].as_f64().unwrap() - expected).abs() < 0.1);
}

#[test]
fn toeplitz_method_tracks_nystrom() {
    let ny = json_of(&sine_gas(&["det", "--s", "2", "--gamma", "0.5"]));
    let tp = json_of(&sine_gas(&["det", "--s", "2", "--gamma", "0.5", "--method", "toeplitz", "--n", "400"]));
    assert_eq!(tp["method"], "toeplitz");
    let diff = (ny["log_det"].as_f64().unwrap() - tp["log_det"].as_f64().unwrap()).abs();
    assert!(diff < 1.0 / 400.0, "{diff}");
}

#[test]
fn domain_error_is_machine_readable() {
    let out = sine_gas(&["det", "--s", "2", "--gamma", "1.5"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["kind"], "domain");

    let out = sine_gas(&["mfun", "--kappa", "1.0"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["kind"], "domain");
}

#[test]
fn bad_flags_are_usage_errors() {
    let out = sine_gas(&["det", "--s", "2", "--gamma", "0.5", "--v", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sine_gas(&["det", "--s", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mfun_is_periodic_and_small() {
    let a = json_of(&sine_gas(&["mfun", "--kappa", "0.3", "--x", "1.25"]));
    let b = json_of(&sine_gas(&["mfun", "--kappa", "0.3", "--x", "0.25"]));
    let (a, b) = (a["m"][0]["value"].as_f64().unwrap(), b["m"][0]["value"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-14, "{a} vs {b}");

    let v = json_of(&sine_gas(&["mfun", "--kappa", "0.01", "--x", "0"]));
    let m = v["m"][0]["value"].as_f64().unwrap();
    let lead = -0.01 / (6.0 * std::f64::consts::PI);
    assert!((m - lead).abs() < 1e-4 * 2.0, "{m}");
}

#[test]
fn mfun_mean_mode_is_second_order() {
    let v = json_of(&sine_gas(&["mfun", "--kappa", "0.05", "--modes", "8"]));
    let modes = v["fourier"].as_array().unwrap();
    assert_eq!(modes.len(), 9);
    assert!(modes[0]["re"].as_f64().unwrap().abs() <= 0.05 * 0.05);
}

#[test]
fn scan_grid_shape_and_residuals() {
    let out = sine_gas(&["scan", "--s", "25,50,100", "--v", "0.5,1,2", "--methods", "nystrom,extended"]);
    assert!(out.status.success());
    assert!(out.stdout.starts_with(b"# sine-gas scan v1\n"));
    let rows = data_rows(&out.stdout);
    assert_eq!(rows.len(), 9);
    let mut headers = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(&out.stdout[..]);
    let headers = headers.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    for r in &rows {
        let ny: f64 = r[col("nystrom")].parse().unwrap();
        let ex: f64 = r[col("extended")].parse().unwrap();
        let res: f64 = r[col("residual_extended")].parse().unwrap();
        assert_eq!(res, ex - ny);
        assert_eq!(&r[col("status")], "ok");
    }
}

#[test]
fn scan_output_is_independent_of_workers_and_repeatable() {
    let args = |w: &'static str| ["scan", "--s", "8,16,24", "--kappa", "0.2,0.5", "--methods", "nystrom,transition,extended", "--workers", w];
    let one = sine_gas(&args("1")).stdout;
    let four = sine_gas(&args("4")).stdout;
    let again = sine_gas(&args("4")).stdout;
    assert!(!one.is_empty());
    assert_eq!(one, four);
    assert_eq!(four, again);
}

#[test]
fn scan_transition_residual_within_budget() {
    let out = sine_gas(&["scan", "--s", "16,24,32,40", "--kappa", "0.4", "--methods", "nystrom,transition"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let records = sine_gas::scan::read_csv(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 4);
    for r in &records {
        let e = r.entry(sine_gas::oracles::Method::Transition).unwrap();
        assert!(e.residual.unwrap().abs() <= e.budget, "s = {}", r.s);
    }
}

#[test]
fn scan_writes_output_file_and_marks_skips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = sine_gas(&[
        "scan",
        "--s",
        "3",
        "--v",
        "0.5,5",
        "--methods",
        "nystrom,transition",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows = data_rows(&std::fs::read(&path).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].iter().next_back(), Some("skip:transition"));
}

#[test]
fn config_file_feeds_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gas.conf");
    std::fs::write(&path, "c_gap = 2.0\n").unwrap();
    let v = json_of(&sine_gas(&["asym", "--regime", "gap", "--s", "10", "--config", path.to_str().unwrap()]));
    assert!((v["error_budget"].as_f64().unwrap() - 0.2).abs() < 1e-15);

    let out = sine_gas(&["asym", "--regime", "gap", "--s", "10", "--config", "/nonexistent/gas.conf"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["kind"], "config");
}

#[test]
fn verify_specfun_passes() {
    let out = sine_gas(&["verify", "--suite", "specfun"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[PASS]"), "{text}");
}
