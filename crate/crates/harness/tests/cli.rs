use std::path::Path;
use std::process::{Command, Output};

fn epi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epi"))
        .args(args)
        .output()
        .expect("spawn epi")
}

fn write(path: &Path, body: &str) {
    std::fs::write(path, body).unwrap();
}

#[test]
fn verify_reports_json_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = (dir.path().join("x.txt"), dir.path().join("y.json"));
    write(&x, "# coin\n0\t0.5\n1\t0.5\n");
    write(&y, "[[0, 0.5], [1, 0.5]]");
    let out = epi(&["verify", "--x", x.to_str().unwrap(), "--y", y.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], true);
    for key in ["H_x", "H_y", "H_z", "N_x", "N_y", "N_z", "lhs", "rhs", "slack"] {
        assert!(v[key].is_f64(), "{key}");
    }
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    write(&bad, "0\t0.5\n1\n");
    let out = epi(&["verify", "--x", bad.to_str().unwrap(), "--y", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(epi(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(epi(&["lemma-check", "5"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    let out = epi(&["verify", "--x", missing.to_str().unwrap(), "--y", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_check_exits_with_one() {
    // a negative tolerance turns the singleton equality case into a failure
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.txt");
    write(&p, "2\t1\n");
    let out = epi(&["verify", "--x", p.to_str().unwrap(), "--y", p.to_str().unwrap(), "--assert-tol=-1e-3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["fuzz", "--trials", "300", "--seed", "42", "--max-support", "5"];
    let a = epi(&args);
    let b = epi(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = epi(&["fuzz", "--trials", "300", "--seed", "43", "--max-support", "5"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let run = epi(&["sweep-sigma", "--alpha-z", "1", "--epsilon", "0.01", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("sigma,K,eta,Phi,F\n"));
    assert!(String::from_utf8(run.stdout).unwrap().contains("sigma0"));
    let bad = epi(&["sweep-sigma", "--alpha-z", "-1", "--epsilon", "0.01", "--out", out.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn families_and_batteries_pass() {
    let fam = epi(&["families", "--n-max", "5"]);
    assert_eq!(fam.status.code(), Some(0));
    let text = String::from_utf8(fam.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 25 + 16);

    let l2 = epi(&["lemma-check", "2", "--cases", "100", "--seed", "7"]);
    assert_eq!(l2.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&l2.stdout).unwrap();
    assert_eq!(v["violations"], 0);

    let l1 = epi(&["lemma-check", "1", "--cases", "4"]);
    assert_eq!(l1.status.code(), Some(0));
}

#[test]
fn generate_writes_readable_pmf() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.txt");
    let run = epi(&["generate", "--spec", r#"{"kind":"binomial","trials":2,"p":0.5}"#, "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "0\t0.25\n1\t0.5\n2\t0.25\n");
}
