use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdt"))
        .args(args)
        .env_remove("RDT_MAX_WEYL")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn standard_file(dir: &Path, family: &str, rank: &str, length2: &str) -> String {
    let path = dir.join(format!("{family}{rank}.json"));
    let p = path.to_str().unwrap().to_string();
    let out = rdt(&["standard", "--type", family, "--rank", rank, "--length2", length2, "--out", &p]);
    assert_eq!(out.status.code(), Some(0));
    p
}

#[test]
fn classify_standard_b3() {
    let dir = tempfile::tempdir().unwrap();
    let b3 = standard_file(dir.path(), "B", "3", "1");
    let out = rdt(&["classify", &b3]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["payload"]["type"], "B3-hat");
    assert_eq!(r["payload"]["pi1"], "Z/2");
    assert_eq!(r["payload"]["weyl_order"], 48);
    assert_eq!(r["diagnostics"].as_array().unwrap().len(), 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let c3 = standard_file(dir.path(), "C", "3", "2");
    for args in [
        vec!["classify", c3.as_str()],
        vec!["split", c3.as_str()],
        vec!["spectrum", "--type", "C", "--rank", "2", "--mults", "0,1,1,1", "--bound", "6"],
        vec!["embed", "--type", "BC", "--rank", "2"],
    ] {
        let a = rdt(&args);
        let b = rdt(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn b2_and_c2_are_not_isomorphic() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = standard_file(dir.path(), "B", "2", "1");
    let c2 = standard_file(dir.path(), "C", "2", "1");
    let out = rdt(&["iso", &b2, &c2]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "invalid");
    assert_eq!(r["payload"]["result"], "not isomorphic");

    let out = rdt(&["iso", &c2, &c2]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["payload"]["isomorphic"], true);
}

#[test]
fn spectrum_starts_at_zero() {
    let out = rdt(&["spectrum", "--type", "C", "--rank", "2", "--mults", "0,1,1,1", "--bound", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let list = r["payload"]["spectrum"].as_array().unwrap();
    assert_eq!(list[0]["lambda_scaled"], "0");
    assert_eq!(list[0]["k"], serde_json::json!([0, 0]));
    // sorted by value
    let values: Vec<f64> = list
        .iter()
        .map(|e| {
            let s = e["lambda_scaled"].as_str().unwrap();
            match s.split_once('/') {
                Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
                None => s.parse().unwrap(),
            }
        })
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert!(values.iter().all(|&v| v <= 6.0));
}

#[test]
fn inconsistent_multiplicities_are_input_errors() {
    let out = rdt(&["spectrum", "--type", "C", "--rank", "2", "--mults", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "error");
}

#[test]
fn datum_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d2 = standard_file(dir.path(), "D", "2", "1/2");
    let printed = report(&rdt(&["standard", "--type", "D", "--rank", "2", "--length2", "1/2"]));
    let written: Value = serde_json::from_str(&fs::read_to_string(&d2).unwrap()).unwrap();
    assert_eq!(printed["payload"]["datum"], written);
    let r = report(&rdt(&["classify", &d2]));
    assert_eq!(r["payload"]["type"], "D2-hat");
    assert_eq!(r["payload"]["length2"], "1/2");
    assert_eq!(report(&rdt(&["validate", &d2]))["payload"]["valid"], true);
}

fn edited(dir: &Path, src: &str, name: &str, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(src).unwrap()).unwrap();
    edit(&mut v);
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn malformed_rational_names_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = standard_file(dir.path(), "C", "2", "1");
    let bad = edited(dir.path(), &c2, "bad.json", |v| v["gram"][0][0] = "1/0".into());
    let out = rdt(&["classify", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "error");
    let diag = r["diagnostics"][0].as_str().unwrap();
    assert!(diag.contains("gram[0][0]"), "{diag}");
    assert!(diag.contains("bad.json"), "{diag}");
}

#[test]
fn dependent_lattice_columns_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = standard_file(dir.path(), "C", "2", "1");
    let bad = edited(dir.path(), &c2, "dep.json", |v| {
        v["lattice_basis"] = serde_json::json!([["1", "2"], ["2", "4"]]);
    });
    let out = rdt(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["diagnostics"][0].as_str().unwrap().contains("dependent"));
}

#[test]
fn invalid_datum_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = standard_file(dir.path(), "C", "2", "1");
    let coarse = edited(dir.path(), &c2, "coarse.json", |v| {
        v["lattice_basis"] = serde_json::json!([["3", "0"], ["0", "3"]]);
    });
    let out = rdt(&["validate", &coarse]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "invalid");
    assert_eq!(r["payload"]["valid"], false);
}

#[test]
fn predicates_answer_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = standard_file(dir.path(), "B", "2", "1");
    let out = rdt(&["polysphere", &b2]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["payload"]["admits_polysphere"], false);

    let out = rdt(&["first-eigencheck", "--type", "A", "--rank", "3", "--mults", "0,0,0,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["payload"]["first_eigenspace_minimal"], false);
}

#[test]
fn weyl_cap_override_warns() {
    let dir = tempfile::tempdir().unwrap();
    let b3 = standard_file(dir.path(), "B", "3", "1");
    let out = Command::new(env!("CARGO_BIN_EXE_rdt"))
        .args(["classify", &b3])
        .env("RDT_MAX_WEYL", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["payload"]["weyl_order"], Value::Null);
    assert!(r["diagnostics"][0].as_str().unwrap().starts_with("warning:"));
}

#[test]
fn embed_writes_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    let out = rdt(&["embed", "--type", "B", "--rank", "2", "--samples", "16", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["payload"]["pass"], true);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    // two coordinates, four weight circles plus the zero component
    assert_eq!(header.len(), 2 + 2 * 5);
    assert_eq!(&header[..4], &["h1", "h2", "re1", "im1"]);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(fields.len(), header.len());
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = rdt(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "error");

    let out = rdt(&["classify", "/nonexistent/datum.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["diagnostics"][0].as_str().unwrap().contains("/nonexistent/datum.json"));

    let out = rdt(&["standard", "--type", "E", "--rank", "6"]);
    assert_eq!(out.status.code(), Some(2));
}
