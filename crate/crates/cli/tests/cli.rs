use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ospq")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn normal_order_examples() {
    assert_eq!(run(&["normal-order", "a1- a1+"]).1.trim(), "q a1+ a1- + (2/(s+s^-1)) k1^-1");
    assert_eq!(run(&["normal-order", "k1"]).1.trim(), "k1");
    assert_eq!(run(&["normal-order", "a2- a1+"]).1.trim(), "q a1+ a2-");
}

#[test]
fn parse_errors_exit_two() {
    let (code, _, err) = run(&["normal-order", "a1- b7"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"), "{err}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(run(&["verify", "--n", "0"]).0, 2);
    assert_eq!(run(&["verify", "--n", "6"]).0, 2);
    assert_eq!(run(&["verify", "--n", "2", "--families", "XYZ"]).0, 2);
    assert_eq!(run(&["rep", "--n", "2", "--k", "1"]).0, 2);
    assert_eq!(run(&["rep", "--n", "4", "--k", "20"]).0, 2);
    assert_eq!(run(&["decompose", "--n", "4", "--k", "20"]).0, 2);
}

#[test]
fn serre_is_empty_for_one_mode() {
    let (code, out, _) = run(&["verify", "--n", "1", "--families", "SERRE"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 checks, 0 failed"), "{out}");
}

#[test]
fn rep_reports_dimension() {
    let (code, out, _) = run(&["rep", "--n", "2", "--k", "3", "--checks", "all"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("dimension 9\n"));
}

#[test]
fn rep_exports_csv() {
    let dir = std::env::temp_dir().join(format!("ospq-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let base = dir.join("m.csv");
    let (code, _, _) = run(&["rep", "--n", "1", "--k", "2", "--out", base.to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.join("m.a1+.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "row,col,re,im");
    let fields: Vec<f64> = rows[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!((fields[0], fields[1]), (1.0, 0.0));
    assert!((fields[2] - 2f64.powf(0.25)).abs() < 1e-12);
    for label in ["a1-", "k1", "L1"] {
        assert!(dir.join(format!("m.{label}.csv")).exists(), "{label}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn decompose_examples() {
    let (code, out, _) = run(&["decompose", "--n", "1", "--k", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("4 blocks, dims 1,1,1,1"), "{out}");
    let (_, out, _) = run(&["decompose", "--n", "3", "--k", "3"]);
    assert!(out.starts_with("7 blocks, dims 1,3,6,7,6,3,1"), "{out}");
    let (_, json, _) = run(&["decompose", "--n", "2", "--k", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["blocks"].as_array().unwrap().len(), 5);
}

#[test]
fn json_reports_are_deterministic_modulo_timestamp() {
    let strip = |s: String| s.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n");
    let a = strip(run(&["verify", "--n", "2", "--families", "all", "--format", "json"]).1);
    let b = strip(run(&["verify", "--n", "2", "--families", "all", "--format", "json"]).1);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&run(&["verify", "--n", "2", "--format", "json"]).1).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["status"], "pass");
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["residual"] == "exact-zero"));
}

#[test]
fn thread_count_does_not_change_results() {
    let run_with = |t: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_ospq"))
            .args(["verify", "--n", "2", "--families", "CK,T", "--format", "json"])
            .env("OSPQ_THREADS", t)
            .output()
            .unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["results"].clone()
    };
    assert_eq!(run_with("1"), run_with("3"));
}

#[test]
fn json_report_can_go_to_a_file() {
    let path = std::env::temp_dir().join(format!("ospq-report-{}.json", std::process::id()));
    let (code, out, _) = run(&["verify", "--n", "1", "--families", "CK", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["parameters"]["n"], 1);
    std::fs::remove_file(path).unwrap();
}
