use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dickson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dickson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn factor_13_2() {
    let out = dickson(&["factor", "--p", "13", "--e", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["p"], 13);
    assert_eq!(doc["e"], 2);
    assert_eq!(doc["mode"], "generator");
    assert_eq!(doc["verified"], true);
    let factors = doc["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 8);
    let degrees: u64 = factors.iter().map(|f| f["degree"].as_u64().unwrap()).sum();
    assert_eq!(degrees, 14);
    // Keys come out in a fixed order.
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys[..3], ["p", "e", "mode"]);
}

#[test]
fn factor_3_has_psi() {
    let doc = stdout_json(&dickson(&["factor", "--p", "3", "--e", "2"]));
    let coeffs: Vec<Value> = doc["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["coeffs"].clone())
        .collect();
    assert_eq!(
        coeffs,
        [
            serde_json::json!([8, 1]),
            serde_json::json!([1, 1]),
            serde_json::json!([1, 0, 1])
        ]
    );
}

#[test]
fn factor_rejects_composite() {
    let out = dickson(&["factor", "--p", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("p must be an odd prime (got 4)"));
    assert_eq!(dickson(&["factor", "--p", "2"]).status.code(), Some(1));
    assert_eq!(
        dickson(&["factor", "--p", "13", "--e", "0"]).status.code(),
        Some(1)
    );
}

#[test]
fn targeted_output() {
    let doc = stdout_json(&dickson(&[
        "factor",
        "--p",
        "19",
        "--e",
        "3",
        "--mode",
        "targeted",
        "--indices",
        "1",
    ]));
    assert_eq!(doc["mode"], "targeted");
    assert_eq!(doc["indices"], serde_json::json!([1]));
    assert_eq!(doc["verified"], false);
    let mids: Vec<u64> = doc["factors"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["degree"] == 2 && f["coeffs"][1] != 0)
        .map(|f| f["coeffs"][1].as_u64().unwrap())
        .collect();
    assert_eq!(mids, [6859 - 6618, 6618]);
    let out = dickson(&["factor", "--p", "19", "--mode", "targeted", "--indices", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lift_trace() {
    let doc = stdout_json(&dickson(&[
        "lift", "--p", "19", "--e", "3", "--index", "1", "--trace",
    ]));
    let steps = &doc["trace"][0]["steps"];
    let s: Vec<u64> = (0..3).map(|h| steps[h]["s"].as_u64().unwrap()).collect();
    let a: Vec<u64> = (0..3).map(|h| steps[h]["a"].as_u64().unwrap()).collect();
    assert_eq!(s, [4, 42, 3652]);
    assert_eq!(a, [6, 120, 6618]);
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let out = dickson(&[
        "factor",
        "--p",
        "29",
        "--e",
        "3",
        "--output",
        good.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = dickson(&["verify", good.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&good).unwrap()).unwrap();
    let c = doc["factors"][3]["coeffs"][1].as_u64().unwrap();
    doc["factors"][3]["coeffs"][1] = ((c + 1) % 24389).into();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, doc.to_string()).unwrap();
    assert_eq!(dickson(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{ not json").unwrap();
    assert_eq!(
        dickson(&["verify", junk.to_str().unwrap()]).status.code(),
        Some(1)
    );
    fs::write(&junk, r#"{"p": 13}"#).unwrap();
    assert_eq!(
        dickson(&["verify", junk.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        dickson(&["verify", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_rejects_partial_set() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.json");
    let out = dickson(&[
        "factor",
        "--p",
        "13",
        "--e",
        "2",
        "--mode",
        "targeted",
        "--indices",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        dickson(&["verify", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_csv() {
    let out = dickson(&["bench", "--primes", "13,17", "--reps", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,e,engine_ms,baseline_ms,ratio");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("13,1,"));

    let out = dickson(&[
        "bench",
        "--p",
        "13",
        "--e",
        "1..3",
        "--reps",
        "1",
        "--no-baseline",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(3).unwrap().starts_with("13,3,") && text.ends_with(",,\n"));
}

#[test]
fn bench_rejects_bad_sweeps() {
    let empty = dickson(&["bench", "--pmin", "24", "--pmax", "28"]);
    assert_eq!(empty.status.code(), Some(1));
    assert!(stderr(&empty).contains("empty"));
    assert_eq!(dickson(&["bench", "--primes", "13,15"]).status.code(), Some(1));
    assert_eq!(dickson(&["bench"]).status.code(), Some(1));
}

#[test]
fn codes_rank_one() {
    let out = dickson(&["codes", "--p", "5", "--rank", "1", "--workers", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(
        "p,rank,log_size,subset_bitmask,pairing_class,d,method,samples,griesmer_2k,griesmer_k\n5,1,"
    ));
}

#[test]
fn codes_argument_errors() {
    assert_eq!(
        dickson(&["codes", "--p", "13", "--rank", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        dickson(&["codes", "--p", "13", "--rank", "20"]).status.code(),
        Some(1)
    );
    assert_eq!(
        dickson(&["codes", "--p", "13", "--rank", "3", "--symmetry"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(dickson(&["codes", "--p", "9"]).status.code(), Some(1));
}

#[test]
fn help_and_unknown_flags() {
    let out = dickson(&["factor", "--help"]);
    assert!(out.status.success());
    let help = String::from_utf8(out.stdout).unwrap();
    for flag in [
        "--p",
        "--e",
        "--mode",
        "--indices",
        "--seed",
        "--no-verify",
        "--output",
    ] {
        assert!(help.contains(flag), "missing {flag}");
    }
    assert_eq!(
        dickson(&["factor", "--p", "13", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(dickson(&["frobnicate"]).status.code(), Some(1));
}
