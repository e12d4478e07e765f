use std::path::Path;
use std::process::{Command, Output};

fn ldb(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldb"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run ldb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let o = ldb(dir.path(), &["construct", "--field", "Q", "--kind", "quaternion", "--q2", "-1,-1", "--out", "ham.alg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(dir.path().join("ham.alg").exists());
    let o = ldb(dir.path(), &["classify", "ham.alg"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("quaternionic"));
    assert!(text.contains("a = -1"));
}

#[test]
fn json_reports_carry_schema() {
    let dir = tempfile::tempdir().unwrap();
    ldb(dir.path(), &["construct", "--field", "Q", "--kind", "dim1", "--out", "d.alg"]);
    let o = ldb(dir.path(), &["--format", "json", "verify", "d.alg"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "ok");
}

#[test]
fn undetermined_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = ldb(dir.path(), &["construct", "--field", "F2(t)", "--kind", "quaternion", "--q2", "1/t,t", "--out", "q.alg"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert_eq!(ldb(dir.path(), &["classify", "q.alg"]).status.code(), Some(2));
}

#[test]
fn isotropic_construction_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = ldb(dir.path(), &["construct", "--field", "Q", "--kind", "quaternion", "--q2", "1,-1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("isotropic"));
}

#[test]
fn parse_and_precondition_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ldb(dir.path(), &["frobnicate"]).status.code(), Some(64));
    assert_eq!(ldb(dir.path(), &["classify", "missing.alg"]).status.code(), Some(65));
    std::fs::write(dir.path().join("bad.alg"), "field Q\nlaw star dim 2 tensor 1\n").unwrap();
    let o = ldb(dir.path(), &["verify", "bad.alg"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    ldb(dir.path(), &["construct", "--field", "Q", "--kind", "quaternion", "--q2", "-1,-1", "--out", "ham.alg"]);
    // q(e) = 2
    assert_eq!(ldb(dir.path(), &["standardize", "ham.alg", "--at", "1,1,0,0"]).status.code(), Some(65));
}

#[test]
fn standardize_writes_workspace() {
    let dir = tempfile::tempdir().unwrap();
    ldb(dir.path(), &["construct", "--field", "Q", "--kind", "octonion", "--q2", "-1,-1", "--eps", "-1", "--out", "o.alg"]);
    let o = ldb(dir.path(), &["standardize", "o.alg", "--at", "0,1,0,0,0,0,0,0", "--out", "s.alg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = std::fs::read_to_string(dir.path().join("s.alg")).unwrap();
    assert!(s.starts_with("field Q"));
    let o = ldb(dir.path(), &["equiv", "o.alg", "s.alg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn twist_on_f3() {
    let dir = tempfile::tempdir().unwrap();
    ldb(dir.path(), &["construct", "--field", "F3", "--kind", "dim1", "--out", "d.alg"]);
    let o = ldb(dir.path(), &["twist", "d.alg", "--singular-scan", "--hyperplane", "--closure"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("27 points"));
    assert!(text.contains("reflexive        no"));
}
