//! End-to-end tests of the installed binary: exit codes, report envelopes
//! and agreement with the library entry points.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exclusionkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn fermion_constant_prints_pi_over_sqrt2() {
    let out = run(&["xi", "--model", "f"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: f64 = text.lines().nth(1).unwrap().parse().unwrap();
    assert!((value - std::f64::consts::PI / 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn xi_s_curve_is_monotone_with_header() {
    let out = run(&["xi", "--model", "s", "--start", "0", "--end", "2", "--step", "0.1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,xi_s"));
    let values: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.len() >= 20);
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    assert!(values.iter().all(|&v| (0.0..std::f64::consts::FRAC_PI_2).contains(&v)));
}

#[test]
fn sample_density_then_cover_produces_valid_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    assert!(run(&["sample-density", "--out", out_dir]).status.success());
    let density = dir.path().join("sample_density.csv");
    assert!(density.exists());

    let out = run(&["cover", "--density", density.to_str().unwrap(), "--out", out_dir]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cover.json")).unwrap())
            .unwrap();
    let sha = report["config_sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    assert!(sha.chars().all(|c| c.is_ascii_hexdigit()));
    let a1 = report["report"]["a1_sums"].as_array().unwrap();
    assert!(!a1.is_empty());
    assert!(a1.iter().all(|r| r["pass"].as_bool().unwrap()));
    assert!(report["report"]["bound"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_known_suite_passes_and_unknown_suite_is_usage_error() {
    let out = run(&["verify", "--suite", "degrees"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["report"]["all_pass"], serde_json::Value::Bool(true));

    let out = run(&["verify", "--suite", "definitely-not-a-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gas_bound_matches_library_value() {
    let out = run(&[
        "bound", "--kind", "gas", "--mu", "1", "--nu", "3", "--particles", "100", "--extent",
        "10",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cli_value = report["report"]["value"].as_f64().unwrap();

    let frac = exclusionkit_core::fractionality::ReducedFraction::new(1, 3).unwrap();
    let spec = exclusionkit_core::GasSpec::new(100.0, 10.0).unwrap();
    let expected =
        exclusionkit_core::bounds::gas_anyon(frac, &spec, &Default::default()).value;
    assert!((cli_value - expected).abs() <= 1e-15 * expected.abs());
}

#[test]
fn trap_bound_reports_lower_below_upper() {
    let out = run(&[
        "bound", "--kind", "trap", "--alpha", "1", "--particles", "100", "--omega", "1",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lower = report["report"]["lower"]["e_lower"].as_f64().unwrap();
    let upper = report["report"]["upper"]["e_upper"].as_f64().unwrap();
    assert!(lower > 0.0);
    assert!(lower <= upper);
}

#[test]
fn degrees_table_has_expected_first_rows() {
    let out = run(&["degrees", "--mu", "1", "--nu", "3", "--kmax", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,n,l,degree,e_pred");
    assert_eq!(lines[1], "1,3,0,-1,2");
    assert_eq!(lines.len(), 4);
}

#[test]
fn config_file_is_honored_and_unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "[uncertainty]\nc1 = 0.25\nc2 = 2.0\n").unwrap();
    let out = run(&["--config", good.to_str().unwrap(), "xi", "--model", "f"]);
    assert_eq!(out.status.code(), Some(0));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "xi", "--model", "f"]);
    assert_eq!(out.status.code(), Some(2));

    let invalid = dir.path().join("invalid.toml");
    std::fs::write(&invalid, "[uncertainty]\nc1 = 5.0\nc2 = 2.0\n").unwrap();
    let out = run(&["--config", invalid.to_str().unwrap(), "xi", "--model", "f"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_header_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.csv");
    std::fs::write(&path, "# side = 1\n# n = 2\n# mass = 99\n1,1\n1,1\n").unwrap();
    let out = run(&["cover", "--density", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(Path::new(path.to_str().unwrap()).exists());
}
