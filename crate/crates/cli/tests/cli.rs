use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

const T3: [&str; 8] = ["--p", "3", "--s", "1", "--t", "3", "--n", "1"];

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn argv(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn ring_description() {
    let ring = |d: &str| {
        let mut a = with(&["ring"], &T3);
        a.extend(["--delta".into(), d.into()]);
        json(&argv(&a))
    };
    let v = ring("1,0,1");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["ring"]["k"], 2);
    assert_eq!(v["ring"]["nilp_index"], 6);
    assert_eq!(v["chain"], false);
    let v = ring("1,1,0");
    assert_eq!(v["chain"], true);
}

#[test]
fn non_unit_delta_is_rejected() {
    let mut a = with(&["ring"], &T3);
    a.extend(["--delta".into(), "0,1,0".into()]);
    let out = run(&argv(&a));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a unit"));
}

fn ideal(gens: &[&str]) -> Value {
    let mut a = with(&["ideal"], &T3);
    a.extend(["--delta".to_string(), "1,0,1".to_string()]);
    for g in gens {
        a.push("--gen".into());
        a.push(g.to_string());
    }
    json(&argv(&a))
}

#[test]
fn ideal_records() {
    let v = ideal(&["u^2"]);
    let c = &v["ideal"]["classification"];
    assert_eq!(c["status"], "classified");
    assert_eq!(c["tag"], 2);
    assert_eq!(c["a"], 0);
    assert_eq!(v["ideal"]["card_exponent"], 3);

    let v = ideal(&["0"]);
    assert_eq!(v["ideal"]["dim"], 0);

    let v = ideal(&["u*phi^2"]);
    let c = &v["ideal"]["classification"];
    assert_eq!(c["tag"], 3);
    assert!(c["L"].is_u64());
}

#[test]
fn ideal_generators_round_trip() {
    for gens in [
        vec!["u*phi^2"],
        vec!["phi^2 + u", "u^2*phi"],
        vec!["u*phi + 2*u^2", "u^2"],
        vec!["x - 1"],
    ] {
        let v = ideal(&gens);
        let shown: Vec<String> = v["ideal"]["generators"]
            .as_array()
            .unwrap()
            .iter()
            .map(|g| g.as_str().unwrap().to_string())
            .collect();
        let back = ideal(&shown.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(back["ideal"]["dim"], v["ideal"]["dim"], "{gens:?}");
        assert_eq!(back["ideal"]["torsion"], v["ideal"]["torsion"], "{gens:?}");
        assert_eq!(
            back["ideal"]["classification"], v["ideal"]["classification"],
            "{gens:?}"
        );
    }
}

#[test]
fn parse_errors_name_the_token() {
    let mut a = with(&["ideal"], &T3);
    a.extend(["--gen".into(), "u + y".into()]);
    let out = run(&argv(&a));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 4") && err.contains('y'), "{err}");
}

#[test]
fn verify_exit_codes() {
    let out = run(&[
        "verify",
        "--p",
        "2,3",
        "--s",
        "1",
        "--t",
        "2,3",
        "--n",
        "1",
        "--no-records",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(!v["reports"].as_array().unwrap().is_empty());

    // the printed type 5 value is too large somewhere at p^s = 4
    let out = run(&[
        "verify",
        "--p",
        "2",
        "--s",
        "2",
        "--t",
        "3",
        "--n",
        "1",
        "--delta",
        "1,0,1",
        "--no-records",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["verify", "--p", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_covers_both_square_branches() {
    let v = json(&["verify", "--p", "3", "--n", "2", "--t", "1,2", "--no-records"]);
    let deltas: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| {
            r["census"]["assertions"]
                .as_array()
                .unwrap()
                .iter()
                .any(|a| a["name"] == "split_plan")
        })
        .map(|r| r["point"]["delta"].as_str().unwrap())
        .collect();
    assert!(deltas.contains(&"1") && deltas.contains(&"2"), "{deltas:?}");
    for d in ["1", "2"] {
        let s = json(&["split", "--p", "3", "--t", "1", "--n", "2", "--delta", d]);
        assert_eq!(s["case"], if d == "1" { "square" } else { "non-square" });
    }
}

#[test]
fn table_rows() {
    let out = run(&["table", "--p", "3", "--t", "3", "--delta", "1,1,0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tag,a,b,c,t0,t1,t2,L,M,T0,T1,T2,card_exponent");
    assert_eq!(lines.count(), 3 * 3 + 1);

    let v = json(&["table", "--p", "3", "--t", "3", "--delta", "1,0,1", "--format", "json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 28);
    let again = json(&["table", "--p", "3", "--t", "3", "--delta", "1,0,1", "--format", "json"]);
    assert_eq!(v, again);
}

#[test]
fn split_reports_factors() {
    let v = json(&["split", "--p", "2", "--t", "2", "--n", "3", "--delta", "1,1"]);
    assert_eq!(v["case"], "cube-2mod3");
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    assert_eq!(v["factors"][1]["kind"], "quadratic-trace");
    assert_eq!(v["bezout"].as_array().unwrap().len(), 2);
}
