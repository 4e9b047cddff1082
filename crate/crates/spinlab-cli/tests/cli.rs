//! End-to-end tests driving the built binary: exit codes, output formats,
//! and run-to-run determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
}

fn workdir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).expect("create tmpdir");
    dir
}

fn expr_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../spinlab/data/spin_functions.expr")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn bracket_reproduces_the_documented_results() {
    // {S3, H} = 0 with H = -S3 from the shipped file
    let output = binary()
        .args(["bracket"])
        .arg(expr_file())
        .args(["S3", "H"])
        .output()
        .expect("spawn");
    assert!(output.status.success());
    assert_eq!(stdout_of(&output).trim(), "0");

    // {x1, px1} = 1
    let output = binary()
        .arg("bracket")
        .arg(expr_file())
        .args(["x1", "px1"])
        .output()
        .expect("spawn");
    assert!(output.status.success());
    assert_eq!(stdout_of(&output).trim(), "1");

    // {S+, S-}_A = u
    let output = binary()
        .arg("bracket")
        .arg(expr_file())
        .args(["Splus", "Sminus", "--mode", "anti"])
        .output()
        .expect("spawn");
    assert!(output.status.success());
    assert_eq!(stdout_of(&output).trim(), "x1*px1 + y1*py1");
}

#[test]
fn bracket_exit_codes_distinguish_parse_and_name_errors() {
    // Lexical garbage: exit 2.
    let output = binary()
        .arg("bracket")
        .arg(expr_file())
        .args(["x1 $", "px1"])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(2));

    // Undefined name: exit 3.
    let output = binary()
        .arg("bracket")
        .arg(expr_file())
        .args(["NoSuchName", "px1"])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(3));

    // Missing file: exit 1.
    let output = binary()
        .args(["bracket", "definitely-not-a-file.expr", "x1", "px1"])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn audit_runs_are_byte_identical_apart_from_the_header() {
    let dir = workdir();
    let config = dir.join("audit-quick.ini");
    std::fs::write(
        &config,
        "[audit]\nspectrum_grid_points = 24\nspectrum_eig_count = 3\n",
    )
    .expect("write config");

    let run = |out: &Path| {
        let output = binary()
            .arg("audit")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(out)
            .output()
            .expect("spawn");
        assert!(output.status.success(), "{:?}", output);
    };
    let first_path = dir.join("audit1.json");
    let second_path = dir.join("audit2.json");
    run(&first_path);
    run(&second_path);

    let parse = |path: &Path| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(path).expect("read")).expect("json")
    };
    let first = parse(&first_path);
    let second = parse(&second_path);

    // Entry lists must agree byte for byte once re-serialized; the header
    // fields (timestamp, tool version) are the only exclusions.
    assert_eq!(
        serde_json::to_string(&first["sections"]).unwrap(),
        serde_json::to_string(&second["sections"]).unwrap()
    );
    assert_eq!(first["summary"], second["summary"]);
    assert_eq!(first["schemaVersion"], 1);

    // The audit must exit 0 even though DISCREPANT entries exist.
    assert!(first["summary"]["discrepant"].as_u64().unwrap() > 0);
}

#[test]
fn default_audit_is_complete_and_contains_the_singlet() {
    let output = binary().arg("audit").output().expect("spawn");
    assert!(output.status.success(), "{:?}", output);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("json");
    assert!(value["summary"]["total"].as_u64().unwrap() >= 40);
    let entries: Vec<&str> = value["sections"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|s| s["entries"].as_array().unwrap())
        .map(|e| e["claimId"].as_str().unwrap())
        .collect();
    assert!(entries.contains(&"eq43.singlet.paper-eq24"));
    assert!(entries.contains(&"eqEB7.positive-floor"));
}

#[test]
fn audit_markdown_format_renders() {
    let dir = workdir();
    let config = dir.join("audit-md.ini");
    std::fs::write(
        &config,
        "[audit]\nspectrum_grid_points = 24\nspectrum_eig_count = 3\n",
    )
    .expect("write config");
    let output = binary()
        .args(["audit", "--format", "markdown", "--config"])
        .arg(&config)
        .output()
        .expect("spawn");
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("# spinlab audit report"));
    assert!(text.contains("eq19a.plus.minus"));
    assert!(text.contains("DISCREPANT"));
}

#[test]
fn simulate_writes_csv_and_a_summary() {
    let dir = workdir();
    let csv_path = dir.join("trajectory.csv");
    let output = binary()
        .args([
            "simulate",
            "--t-end",
            "6.283185307179586",
            "--dt",
            "0.001",
            "--out",
        ])
        .arg(&csv_path)
        .output()
        .expect("spawn");
    assert!(output.status.success(), "{:?}", output);

    let summary = stdout_of(&output);
    let deviation: f64 = summary
        .split_whitespace()
        .find_map(|field| field.strip_prefix("rel=").map(|v| v.parse().unwrap()))
        .expect("summary has rel= field");
    assert!(deviation <= 1e-7, "relative deviation {deviation}");

    let csv = std::fs::read_to_string(&csv_path).expect("csv written");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "time,x,y,px,py,S1,S2,S3,S0");
    assert_eq!(csv.lines().count(), 6285); // header + 6284 samples
}

#[test]
fn simulate_with_zero_duration_emits_one_row() {
    let output = binary()
        .args(["simulate", "--t-end", "0"])
        .output()
        .expect("spawn");
    assert!(output.status.success());
    let csv = stdout_of(&output);
    assert_eq!(csv.lines().count(), 2); // header + initial row
}

#[test]
fn simulate_with_zero_field_holds_s_values_constant() {
    let dir = workdir();
    let config = dir.join("zero-field.ini");
    std::fs::write(&config, "[physical]\nfield_b3 = 0\n").expect("write config");
    let output = binary()
        .args(["simulate", "--t-end", "0.5", "--dt", "0.01", "--config"])
        .arg(&config)
        .output()
        .expect("spawn");
    assert!(output.status.success());
    let csv = stdout_of(&output);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    let s_cols =
        |row: &str| -> Vec<String> { row.split(',').skip(5).map(str::to_string).collect() };
    let first = s_cols(rows[0]);
    for row in &rows {
        assert_eq!(s_cols(row), first);
    }
}

#[test]
fn spectrum_json_has_the_analytic_reference() {
    let dir = workdir();
    let config = dir.join("spectrum-small.ini");
    std::fs::write(
        &config,
        "[spectrum]\ngrid_points = 24\nhalf_width = 7.0\neig_count = 3\n",
    )
    .expect("write config");
    let output = binary()
        .args(["spectrum", "--config"])
        .arg(&config)
        .output()
        .expect("spawn");
    assert!(output.status.success(), "{:?}", output);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("json");
    let lambdas = value["lambdas"].as_array().unwrap();
    assert_eq!(lambdas.len(), 3);
    assert!((lambdas[0].as_f64().unwrap() - 1.0).abs() < 0.05);
    assert_eq!(value["analyticLambdas"][0], 1.0);

    // CSV format too.
    let output = binary()
        .args(["spectrum", "--format", "csv", "--config"])
        .arg(&config)
        .output()
        .expect("spawn");
    assert!(output.status.success());
    assert!(stdout_of(&output).starts_with("index,lambda,energy,degeneracyCluster"));
}

#[test]
fn exclusion_reports_the_singlet_and_the_rejected_partner() {
    let output = binary().arg("exclusion").output().expect("spawn");
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("json");
    let derivations = value["derivations"].as_array().unwrap();
    assert_eq!(derivations.len(), 2);
    for derivation in derivations {
        assert_eq!(derivation["jointDimension"], 2);
        assert_eq!(derivation["singlet"]["exact"], "(0, 1, -1, 0)");
        let unit = derivation["singlet"]["unit"].as_array().unwrap();
        assert!((unit[1].as_f64().unwrap() - 0.7071067811865475).abs() < 1e-12);
        assert!((unit[2].as_f64().unwrap() + 0.7071067811865475).abs() < 1e-12);
        assert_eq!(derivation["rejected"]["reason"], "exchange-symmetric");
    }
}

#[test]
fn bad_config_files_exit_2_with_a_position() {
    let dir = workdir();
    let config = dir.join("broken.ini");
    std::fs::write(&config, "[physical]\nmass = not-a-number\n").expect("write config");
    let output = binary()
        .args(["audit", "--config"])
        .arg(&config)
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn invalid_kappa_is_a_semantic_error() {
    let output = binary()
        .args(["simulate", "--kappa", "-1", "--t-end", "0"])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(3));
}
