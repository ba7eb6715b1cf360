use std::collections::BTreeSet;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2asym")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn monotones_running_example() {
    let (code, v) = json(&["monotones", "0.6", "0.4", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "monotones");
    let p = &v["payload"]["profile"];
    let want = [
        ("a_x", 0.4),
        ("b_x", 0.5),
        ("a_y", 0.6),
        ("b_y", (3.0f64 / 7.0).sqrt()),
        ("a_z", 0.52f64.sqrt()),
        ("b_z", 0.52f64.sqrt()),
    ];
    for (k, w) in want {
        assert!((p[k].as_f64().unwrap() - w).abs() <= 1e-12, "{k}");
    }
    assert!(v["payload"]["report"]["equality_residuals"].is_array());
}

#[test]
fn monotones_zero_and_outside() {
    let (code, v) = json(&["monotones", "0", "0", "0"]);
    assert_eq!(code, 0);
    for k in ["a_x", "b_x", "a_y", "b_y", "a_z", "b_z"] {
        assert_eq!(v["payload"]["profile"][k].as_f64(), Some(0.0));
    }
    let (code, v) = json(&["monotones", "1", "0.1", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "OutsideBall");
}

#[test]
fn convert_examples() {
    let (code, v) = json(&["convert", "0", "0.8", "0", "--", "0.3", "0.5", "0", "--axis", "x"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["verdict"]["decision"], "convertible");

    let (_, v) = json(&["convert", "0.9", "0.1", "0", "--", "0", "0.2", "0", "--axis", "x"]);
    assert_eq!(v["payload"]["verdict"]["decision"], "not-convertible");
    assert_eq!(v["payload"]["verdict"]["reason"], "A-violated");

    let (_, v) = json(&["convert", "0", "0.5", "0", "--", "0", "0.5", "0", "--axis", "x"]);
    assert_eq!(v["payload"]["verdict"]["decision"], "convertible");
    assert_eq!(v["payload"]["comparability"], "equivalent");
}

#[test]
fn convert_with_oracle_and_negative_components() {
    let (code, v) = json(&["convert", "-0.1", "0.8", "0", "--", "0.3", "-0.5", "0", "--axis", "0,0,-1", "--oracle"]);
    assert_eq!(code, 0);
    let feasible = v["payload"]["oracle"]["feasible"].as_bool().unwrap();
    let convertible = v["payload"]["verdict"]["decision"] == "convertible";
    assert_eq!(feasible, convertible);
}

#[test]
fn convert_rejects_bad_states() {
    let (code, v) = json(&["convert", "0.9", "0.9", "0", "--", "0", "0", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "OutsideBall");
    let (code, v) = json(&["convert", "0", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Usage");
}

#[test]
fn region_cross_section_labels() {
    let (header, rows) = csv_rows(&["region", "--cross-section", "Ax=0.5", "--grid", "200"]);
    assert_eq!(header, ["kind", "Ay", "Az", "member", "boundary"]);
    let ids: BTreeSet<&str> = rows.iter().map(|r| r[4].as_str()).filter(|s| !s.is_empty()).collect();
    let want: BTreeSet<&str> = ["bottom-left", "bottom-right", "top-left", "top-right"].into();
    assert_eq!(ids, want);
    assert_eq!(rows.iter().filter(|r| r[0] == "grid").count(), 200 * 200);
}

#[test]
fn region_subset_rows_pass() {
    let (header, rows) = csv_rows(&["region", "--subset", "Bx,By,Bz", "--samples", "10000", "--seed", "1"]);
    assert_eq!(&header[3..6], ["Bx", "By", "Bz"]);
    assert_eq!(rows.len(), 10000);
    assert!(rows.iter().all(|r| r.last().unwrap() == "true"));
}

#[test]
fn region_closure_section() {
    let (header, rows) = csv_rows(&["region", "--closure", "0.6,0.4,0", "--axis", "x", "--grid", "100"]);
    assert_eq!(&header[1..3], ["s_x", "s_y"]);
    let ids: BTreeSet<&str> = rows.iter().map(|r| r[4].as_str()).filter(|s| !s.is_empty()).collect();
    assert!(ids.contains("cylinder") && ids.contains("spheroid"));
    // members stay inside |s_y| ≤ A = 0.4 and the ellipse with minor radius B = 0.5
    let h = 2.0 / 99.0;
    for r in rows.iter().filter(|r| r[0] == "grid" && r[3] == "true") {
        let x: f64 = r[1].parse().unwrap();
        let y: f64 = r[2].parse().unwrap();
        assert!(y.abs() <= 0.4 + 1e-12, "{r:?}");
        assert!(x * x + y * y / 0.25 <= 1.0 + 2.0 * h, "{r:?}");
    }
}

#[test]
fn region_requires_a_mode() {
    let (code, v) = json(&["region"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Usage");
    let (code, v) = json(&["region", "--subset", "Qx"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "InvalidConfig");
}

#[test]
fn verify_exit_codes() {
    let (code, v) = json(&["verify", "--suite", "equalities", "--n", "100000", "--seed", "1"]);
    assert_eq!(code, 0);
    let rep = &v["payload"]["reports"][0];
    assert_eq!(rep["pass"], true);
    assert!(rep["checks"][0]["value"].as_f64().unwrap() <= 1e-10);

    let (code, v) = json(&["verify", "--suite", "oracle", "--pairs", "200", "--margin", "0.02"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["pass"], true);

    let (code, _) = json(&["verify", "--suite", "unknown"]);
    assert_eq!(code, 2);
    let (code, _) = json(&["verify", "--suite", "oracle", "--pairs", "5", "--margin", "1e-4"]);
    assert_eq!(code, 2);
}

#[test]
fn closure_probe_and_precondition() {
    let (code, v) = json(&["closure", "0", "0.5", "0", "--points", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["unreached"], 0);
    assert_eq!(v["payload"]["reached_outside"], 0);
    let (code, v) = json(&["closure", "0.5", "0", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Precondition");
}

#[test]
fn oracle_search_and_agreement() {
    let (code, v) = json(&["oracle", "0", "0.5", "0", "--", "0", "0.52", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["feasible"], false);
    let (code, v) = json(&["oracle", "--pairs", "100", "--axis", "y", "--seed", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["disagreements"].as_array().unwrap().len(), 0);
}

#[test]
fn deterministic_output() {
    for args in [
        &["region", "--subset", "Ax,By", "--samples", "500", "--seed", "9"][..],
        &["verify", "--suite", "realizability", "--n", "5000", "--seed", "3"][..],
        &["oracle", "--pairs", "50", "--seed", "4"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
    let seq = run(&["verify", "--suite", "inequalities", "--n", "5000", "--sequential"]);
    let par = run(&["verify", "--suite", "inequalities", "--n", "5000"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["payload"]["params"]["exec"] = Value::Null;
        v
    };
    assert_eq!(strip(&seq), strip(&par));
}

#[test]
fn csv_and_json_numbers_are_bit_identical() {
    let state = ["0.123456789012345", "-0.3141592653589793", "0.2718281828459045"];
    let mut args = vec!["monotones"];
    args.extend(state);
    let (_, v) = json(&args);
    args.extend(["--format", "csv"]);
    let (header, rows) = csv_rows(&args);
    let keys = ["a_x", "b_x", "a_y", "b_y", "a_z", "b_z"];
    for (k, col) in keys.iter().zip(&header[3..]) {
        let i = header.iter().position(|h| h == col).unwrap();
        let from_csv: f64 = rows[0][i].parse().unwrap();
        let from_json = v["payload"]["profile"][k].as_f64().unwrap();
        assert_eq!(from_csv.to_bits(), from_json.to_bits(), "{k}");
    }
    for (i, s) in state.iter().enumerate() {
        let from_csv: f64 = rows[0][i].parse().unwrap();
        assert_eq!(from_csv.to_bits(), s.parse::<f64>().unwrap().to_bits());
    }
}
