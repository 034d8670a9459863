use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use blackwell::cli::{
    main_with, ClaimRow, ClaimStatus, RunOutput, VerificationReport, EXIT_DISAGREEMENT,
};

const EXE: &str = env!("CARGO_BIN_EXE_blackwell");

fn blackwell(args: &[&str]) -> Output {
    Command::new(EXE).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

const ENVELOPE: &[&str] = &[
    "envelope",
    "--pointer",
    "uniform:0,3",
    "--lesser",
    "1",
    "--greater",
    "2",
    "--trials",
    "10000",
    "--seed",
    "7",
];

const CIRCULAR: &[&str] = &[
    "circular",
    "--stations",
    "10",
    "--arcs",
    "arcs:1/55,2/55,3/55,4/55,5/55,6/55,7/55,8/55,9/55,10/55",
    "--rs-policy",
    "fixed:0",
    "--destination",
    "4",
    "--trials",
    "10000",
    "--seed",
    "7",
];

#[test]
fn envelope_json_matches_golden() {
    let out = blackwell(ENVELOPE);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), golden("envelope_uniform.json"));

    let text = stdout(&out);
    let keys: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("  \""))
        .filter_map(|l| l.split('"').next())
        .collect();
    assert_eq!(
        keys,
        [
            "scenario", "params", "n", "k", "p_hat", "ci_low", "ci_high", "analytic", "oracle",
            "verdict", "seed"
        ]
    );
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!((v["p_hat"].as_f64().unwrap() - 2.0 / 3.0).abs() < 0.02);
    assert!((v["analytic"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(v["oracle"].is_null());
}

#[test]
fn circular_json_matches_golden() {
    let out = blackwell(CIRCULAR);
    assert_eq!(stdout(&out), golden("circular_destination.json"));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["analytic"].as_f64().unwrap() - 0.6).abs() < 1e-12);
    assert!((v["oracle"].as_f64().unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn rail_control_csv_matches_golden() {
    let out = blackwell(&[
        "rail",
        "--mode",
        "control",
        "--origin",
        "5",
        "--pointer",
        "uniform:0,10",
        "--trials",
        "10000",
        "--seed",
        "7",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text, golden("rail_control.csv"));

    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_owned)
        .collect();
    assert_eq!(header[0], "scenario");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let analytic = header.iter().position(|h| h == "analytic").unwrap();
    assert_eq!(&rows[0][analytic], "0.5");
    // The params column holds JSON with commas and quotes, so it is quoted.
    let params: Value = serde_json::from_str(&rows[0][1]).unwrap();
    assert_eq!(params["mode"], "control");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = blackwell(ENVELOPE);
    let b = blackwell(ENVELOPE);
    assert_eq!(a.stdout, b.stdout);

    let mut one_worker = ENVELOPE.to_vec();
    one_worker.extend(["--workers", "1"]);
    let mut many = ENVELOPE.to_vec();
    many.extend(["--workers", "5"]);
    assert_eq!(blackwell(&one_worker).stdout, blackwell(&many).stdout);
}

#[test]
fn validation_errors_exit_2() {
    let out = blackwell(&[
        "envelope",
        "--pointer",
        "uniform:3,0",
        "--lesser",
        "1",
        "--greater",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("a < b required"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let out = blackwell(&["circular", "--stations", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("stationCount ≥ 5 required"),
        "{}",
        stderr(&out)
    );

    let out = blackwell(&["verify", "--trials", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("trials"), "{}", stderr(&out));

    let out = blackwell(&["rail", "--mode", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mode"), "{}", stderr(&out));

    let out = blackwell(&["envelope", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(
        &path,
        r#"{"scenario": "envelope", "pointer": "uniform:0,3", "lesser": 1, "greater": 2, "trials": 10000, "seed": 99}"#,
    )
    .unwrap();
    let path = path.to_str().unwrap();

    let from_file = blackwell(&["--config", path]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    let v: Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(v["seed"], 99);

    let overridden = blackwell(&["--config", path, "--seed", "7"]);
    assert_eq!(
        overridden.stdout,
        golden("envelope_uniform.json").into_bytes()
    );

    fs::write(
        dir.path().join("bad.json"),
        r#"{"scenario": "envelope", "colour": "red"}"#,
    )
    .unwrap();
    let bad = blackwell(&["--config", dir.path().join("bad.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("colour"), "{}", stderr(&bad));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let mut args = ENVELOPE.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let out = blackwell(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        golden("envelope_uniform.json")
    );
}

#[test]
fn named_stations_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stations.txt");
    fs::write(
        &path,
        "# west to east\nLinden\nAvon\nMarsh\n\nKestrel\nBrook\n",
    )
    .unwrap();
    let out = blackwell(&[
        "rail",
        "--stations",
        path.to_str().unwrap(),
        "--trials",
        "20000",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["analytic"].is_null());
    // Five stations: (n + 1) / (2 (n - 1)) = 3/4.
    assert!((v["oracle"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(v["verdict"], "contains_target");
}

#[test]
fn verify_report_flags_findings_not_failures() {
    let a = blackwell(&["verify", "--trials", "100000", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let a: Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = a["rows"].as_array().unwrap();
    assert!(rows.len() >= 10);
    assert_eq!(a["failures"], 0);
    assert!(a["findings"].as_u64().unwrap() >= 2);
    for id in ["circular.average.opposite_rs", "circular.average.fixed_rs"] {
        let row = rows.iter().find(|r| r["id"] == id).unwrap();
        assert_eq!(row["status"], "FINDING", "{id}");
    }

    let b = blackwell(&[
        "verify", "--trials", "100000", "--format", "json", "--seed", "43",
    ]);
    let b: Value = serde_json::from_slice(&b.stdout).unwrap();
    let column = |v: &Value, key: &str| -> Vec<Value> {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r[key].clone())
            .collect()
    };
    assert_eq!(column(&a, "formula"), column(&b, "formula"));
    assert_eq!(column(&a, "oracle"), column(&b, "oracle"));
    assert_eq!(column(&a, "status"), column(&b, "status"));
    assert_ne!(column(&a, "estimate"), column(&b, "estimate"));
}

#[test]
fn verify_table_is_default() {
    let out = blackwell(&["verify", "--trials", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("verification report: seed 42"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("FINDING  circular.average.opposite_rs")));
    assert!(text.trim_end().ends_with("0 failures"));
}

#[test]
fn failing_report_exits_3() {
    let report = VerificationReport {
        seed: 1,
        trials_per_claim: 100_000,
        rows: vec![ClaimRow {
            id: "broken",
            claim: "a claim that does not hold",
            formula: Some(0.6),
            oracle: Some(0.6),
            estimate: None,
            status: ClaimStatus::Failure,
            note: String::new(),
        }],
        failures: 1,
        findings: 0,
    };
    assert_eq!(RunOutput::Report(report).exit_code(), EXIT_DISAGREEMENT);
}

#[test]
fn in_process_entry_point() {
    let mut buf = Vec::new();
    let code = main_with(
        std::iter::once("blackwell").chain(ENVELOPE.iter().copied()),
        &mut buf,
    );
    assert_eq!(code, 0);
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        golden("envelope_uniform.json")
    );
}
