use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hermlat").chain(args.iter().copied());
    let code = hermlat_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn classes_gaussian_unimodular() {
    let (code, v) = json(&["classes", "--m", "1", "--ell", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "classes");
    assert_eq!(v["data"]["I"], "1");
    assert_eq!(v["data"]["h1"], "1");
    assert_eq!(v["data"]["h2"], "1");
    assert_eq!(v["data"]["e"], serde_json::json!(["8"]));
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn classes_eisenstein_unit_order() {
    let (code, v) = json(&["classes", "--m", "3", "--ell", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["e"], serde_json::json!(["12"]));
}

#[test]
fn invalid_configurations_exit_two() {
    assert_eq!(run(&["classes", "--m", "4", "--ell", "1"]).0, 2);
    assert_eq!(run(&["classes", "--m", "1", "--ell", "0"]).0, 2);
    assert_eq!(run(&["verify", "--m", "1", "--ell", "3"]).0, 2);
    assert_eq!(run(&["verify", "--m", "1", "--ell", "1", "--checks", "bogus"]).0, 2);
    assert_eq!(run(&["repnums", "--m", "1", "--ell", "1", "--bad-primes", "4"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
}

#[test]
fn experimental_flag_admits_and_tags() {
    let (code, _, err) = run(&["classes", "--m", "2", "--ell", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("--experimental"));
    let (code, v) = json(&["verify", "--m", "2", "--ell", "1", "--nmax", "12", "--experimental", "--checks", "r-eq-n,zeta-hat"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["experimental"], true);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--m", "1", "--ell", "1", "--nmax", "30"];
    let (c1, o1, _) = run(&args);
    let (c2, o2, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    let v: Value = serde_json::from_str(&o1).unwrap();
    assert!(v["summary"]["pass"].as_u64().unwrap() > 0);
    assert_eq!(v["summary"]["fail"], 0);
    let records = v["records"].as_array().unwrap();
    assert!(records.iter().all(|r| r["pass"] == true));
    assert!(records.iter().all(|r| r["lhs"].is_string() && r["rhs"].is_string()));
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["repnums", "--m", "3", "--ell", "1", "--nmax", "10", "--format", "csv", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("check"));
    assert_eq!(lines.count(), 10);
}

#[test]
fn scan_maximality_table() {
    let (code, out, _) = run(&["scan-maximality", "--m-list", "2,1", "--ell-max", "6", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,ell,satisfies_conditions,maximal,agreement,squarefree_shortcut,witness");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("1,1,true,true,true"));
    assert!(lines[7..].iter().all(|l| l.split(',').nth(4) == Some("unasserted")));
}

#[test]
fn scan_maximality_empty_list() {
    let (code, v) = json(&["scan-maximality", "--m-list", "", "--ell-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["records"], serde_json::json!([]));
    assert_eq!(v["summary"]["pass"], 0);
}

#[test]
fn binary_round_trip() {
    let out = Command::new(env!("CARGO_BIN_EXE_hermlat"))
        .args(["brandt", "--m", "11", "--ell", "1", "--nmax", "20"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "brandt");
    assert!(String::from_utf8_lossy(&out.stderr).contains("passed"));
}
