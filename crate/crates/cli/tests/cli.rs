use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_residue-tilings"));
    cmd.env_remove("RESIDUE_TILINGS_LIMIT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn sum_examples() {
    for (w, h, expected) in [
        ("2", "4", "-1"),
        ("0", "0", "1"),
        ("3", "3", "0"),
        ("1", "2", "1"),
    ] {
        let out = run(&["sum", "--width", w, "--height", h]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), format!("{expected}\n"), "{w} x {h}");
    }
}

#[test]
fn sum_over_profile_limit_exits_2() {
    let out = run(&["sum", "--width", "25", "--height", "25"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_and_listing() {
    assert_eq!(
        stdout(&run(&["count", "--width", "4", "--height", "4"])),
        "36\n"
    );
    let out = run(&["count", "--width", "2", "--height", "2", "--list"]);
    let tilings = json(&out);
    let tilings = tilings.as_array().unwrap();
    assert_eq!(tilings.len(), 2);
    for t in tilings {
        for d in t.as_array().unwrap() {
            assert_eq!(d["cells"].as_array().unwrap().len(), 2);
            assert!(matches!(d["orientation"].as_str(), Some("h" | "v")));
        }
    }
}

#[test]
fn enumeration_limit_from_flag_and_environment() {
    let args = ["count", "--width", "2", "--height", "4", "--list"];
    assert_eq!(run(&args).status.code(), Some(0));
    let limited = bin()
        .args(args)
        .env("RESIDUE_TILINGS_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(2));
    let flag_wins = bin()
        .args(args)
        .args(["--limit", "8"])
        .env("RESIDUE_TILINGS_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
    let bad = bin()
        .args(args)
        .env("RESIDUE_TILINGS_LIMIT", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn jacobi_and_detk() {
    assert_eq!(stdout(&run(&["jacobi", "--m", "3", "--n", "5"])), "-1\n");
    assert_eq!(stdout(&run(&["jacobi", "--m", "6", "--n", "9"])), "0\n");
    assert_eq!(
        run(&["jacobi", "--m", "3", "--n", "4"]).status.code(),
        Some(4)
    );
    assert_eq!(stdout(&run(&["detk", "--m", "3", "--n", "3"])), "0\n");
    let dump = json(&run(&["detk", "--m", "3", "--n", "3", "--dump"]));
    assert_eq!(dump["matrix"], serde_json::json!([[-1, -1], [-1, -1]]));
    assert_eq!(dump["basis"], serde_json::json!([[1, 1], [2, 2]]));
    assert_eq!(dump["det"], "0");
}

#[test]
fn verify_examples() {
    let out = run(&[
        "verify",
        "--m-max",
        "10",
        "--n-max",
        "9",
        "--methods",
        "dp,det",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["summary"]["cases"], 100);
    assert_eq!(report["summary"]["failed"], 0);

    let single = json(&run(&["verify", "--m-max", "1", "--n-max", "1"]));
    assert_eq!(single["cases"].as_array().unwrap().len(), 1);
    assert_eq!(single["cases"][0]["lhs"], "1");
    assert_eq!(single["cases"][0]["rhs"], 1);

    let spectral = run(&[
        "verify",
        "--methods",
        "spectral",
        "--m-max",
        "9",
        "--n-max",
        "9",
    ]);
    assert_eq!(spectral.status.code(), Some(0));
}

#[test]
fn verify_tolerance_failure_exits_1() {
    let out = run(&[
        "verify",
        "--methods",
        "spectral",
        "--m-max",
        "9",
        "--n-max",
        "9",
        "--tol",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert!(report["summary"]["failed"].as_u64().unwrap() > 0);
    let failing = report["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["pass"] == false)
        .unwrap();
    assert!(failing["lhs"].is_null() && failing["error"].is_string());
}

#[test]
fn verify_is_deterministic_and_sorted() {
    let args = [
        "verify",
        "--m-max",
        "8",
        "--n-max",
        "7",
        "--methods",
        "spectral,dp,det",
    ];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let many = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, many.stdout);
    let report = json(&one);
    let keys: Vec<(u64, u64)> = report["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["n"].as_u64().unwrap(), c["m"].as_u64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn table_csv_and_json() {
    let out = run(&["table", "--m-max", "5", "--n-max", "5"]);
    let text = stdout(&out);
    assert!(text.starts_with("m,n,S,jacobi,agree\n"));
    for row in ["4,3,-1,-1,true", "3,3,0,0,true", "1,5,1,1,true"] {
        assert!(text.lines().any(|l| l == row), "missing {row}");
    }
    assert!(!text.contains('\r'));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = run(&["table", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 50);
    assert!(rows.as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn table_io_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("table.csv");
    let out = run(&["table", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lemma_examples() {
    let out = run(&["lemma", "periodicity", "--n", "3", "--m-max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["lemma"], "periodicity");
    assert_eq!(report["cases"].as_array().unwrap().len(), 8);
    assert_eq!(report["all_pass"], true);

    let gauss = run(&["lemma", "gauss", "--max", "49"]);
    assert_eq!(gauss.status.code(), Some(0));
    let case = &json(&gauss)["cases"][0];
    assert!(case["inputs"].is_object() && case["lhs"].is_string() && case["rhs"].is_string());

    assert_eq!(run(&["lemma", "unknown"]).status.code(), Some(4));
}

#[test]
fn every_lemma_runs() {
    for name in [
        "flip-connectivity",
        "h-even",
        "kasteleyn-det",
        "norm-bridge",
        "gauss-even",
        "l-closed-form",
        "decomposition",
        "coprime-vanishing",
        "y-decomposition",
        "half-board",
        "parity",
        "eisenstein",
        "ktf",
    ] {
        let out = run(&["lemma", name]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["failed"], 0, "{name}");
    }
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(run(&["sum", "--width", "2"]).status.code(), Some(4));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(
        run(&["verify", "--methods", "magic"]).status.code(),
        Some(4)
    );
    assert_eq!(run(&["verify", "--jobs", "0"]).status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
