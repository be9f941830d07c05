use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfore")).args(args).output().expect("spawn hopfore")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn both_engines_match() {
    let cfg = fixture("case3_s3_sbar6.json");
    for (l, r) in [("V2(eps)", "V2(eps)"), ("V4(chi)", "V5(eps)"), ("W1(eps; eta=1)", "W2(chi; eta=2+z)"), ("V3(eps)", "W1(eps; eta=z)")] {
        let o = run(&["tensor", "--config", &cfg, "--engine", "both", l, r]);
        assert_eq!(o.status.code(), Some(0), "{l} x {r}: {}", stdout(&o));
        assert!(stdout(&o).contains("MATCH"));
    }
}

#[test]
fn unit_leaves_module_unchanged() {
    let cfg = fixture("case3_s3_sbar6.json");
    let o = run(&["tensor", "--config", &cfg, "--engine", "rules", "V1(eps)", "2*V3(chi) + W1(eps; eta=z)"]);
    assert_eq!(o.status.code(), Some(0));
    let json = run(&["tensor", "--config", &cfg, "--engine", "rules", "--format", "json", "V1(eps)", "2*V3(chi) + W1(eps; eta=z)"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["rules"], v["right"]);
}

#[test]
fn case_one_express() {
    let cfg = fixture("case1.json");
    let o = run(&["green", "express", "--config", &cfg, "--module", "V5(eps)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "y^4 - 3*chr(free=[2], tor=[])*y^2 + chr(free=[4], tor=[])");
}

#[test]
fn relations_and_basis_pass() {
    for cfg in ["case1.json", "case3_s3_sbar6.json"] {
        let cfg = fixture(cfg);
        let o = run(&["green", "relations", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let o = run(&["green", "basis", "--config", &cfg, "--trunc", "12"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("unimodular"));
    }
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "11", "--budget", "15"]);
    let b = run(&["selftest", "--seed", "11", "--budget", "15"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["selftest", "--seed", "11", "--budget", "15", "--format", "json"]);
    let b = run(&["selftest", "--seed", "11", "--budget", "15", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tamper_is_detected() {
    let cfg = fixture("case3_s3_sbar6.json");
    let o = run(&["selftest", "--config", &cfg, "--budget", "10", "--tamper"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn exit_codes() {
    let good = fixture("case3_s3_sbar6.json");
    assert_eq!(run(&["config", "validate", "--config", &good]).status.code(), Some(0));
    assert_eq!(run(&["config", "validate", "--config", &fixture("bad_trivial.json")]).status.code(), Some(4));
    assert_eq!(run(&["config", "validate", "--config", "/nonexistent.json"]).status.code(), Some(4));
    assert_eq!(run(&["config", "validate"]).status.code(), Some(4));
    assert_eq!(run(&["tensor", "--config", &good, "V1(eps", "V1(eps)"]).status.code(), Some(4));
    assert_eq!(run(&["tensor", "--config", &good, "W2(eps; eta=0)", "V1(eps)"]).status.code(), Some(4));
    assert_eq!(run(&["tensor", "--bogus"]).status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
