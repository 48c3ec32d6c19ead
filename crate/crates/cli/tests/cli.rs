use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htp-lab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn ec4_pair() {
    let out = lab(&["lemma", "ec4", "--curve", "37a", "--m", "5", "--n", "10", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["results"];
    assert_eq!(r["holds"], true);
    assert_eq!(r["q"], 2);
}

#[test]
fn torus_ranks() {
    let out = lab(&["torus", "analyze", "--K", "gauss", "--L", "sqrt2", "--KL", "compositum", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["results"];
    assert_eq!(r["equation_holds"], true);
    assert_eq!((r["rank_torus_ok"].as_i64(), r["rank_torus_z"].as_i64()), (Some(1), Some(1)));
}

#[test]
fn witness_file_round_trips_through_verify() {
    let dir = std::env::temp_dir().join(format!("htp-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w3.json");
    let p = path.to_str().unwrap();
    let out = lab(&["htp", "witness", "--field", "rationals", "--xi", "3", "--out", p, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["results"]["witness"]["m"], 1540);
    assert_eq!(r["results"]["witness"]["n"], 4620);
    let out = lab(&["htp", "verify", "--witness", p, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["verdict"], true);

    // A tampered index is rejected with the negative exit code.
    let mut w: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    w["n"] = Value::from(1540 * 2);
    std::fs::write(&path, w.to_string()).unwrap();
    let out = lab(&["htp", "verify", "--witness", p, "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["results"]["verdict"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bounded_negative_exits_two() {
    let out = lab(&["htp", "witness", "--field", "gauss", "--xi", "0,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["results"]["verdict"], "NoWitnessWithinCaps");

    let out = lab(&["htp", "witness", "--field", "rationals", "--xi", "3", "--max-index", "1000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let flags = json_of(&out)["cap_flags"].as_array().unwrap().len();
    assert!(flags > 0);
}

#[test]
fn errors_exit_one() {
    assert_eq!(lab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(lab(&["--config", "/nonexistent/workbench.json", "suite"]).status.code(), Some(1));
    assert_eq!(lab(&["ideal", "factor", "--field", "nowhere", "--x", "1"]).status.code(), Some(1));
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["ideal", "factor", "--field", "sqrtm5", "--x", "6", "--format", "json"];
    let strip = |o: Output| {
        let mut v = json_of(&o);
        v.as_object_mut().unwrap().remove("timing");
        v.to_string()
    };
    assert_eq!(strip(lab(&args)), strip(lab(&args)));
}

#[test]
fn csv_rows_for_eds_records() {
    let out = lab(&["curve", "eds", "--curve", "37a", "--max", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rdr.headers().unwrap().iter().next(), Some("n"));
}
