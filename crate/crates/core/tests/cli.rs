use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgs")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = mgs(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

#[test]
fn every_subcommand_reports_a_verdict() {
    assert_eq!(json(&["ball", "D6:a,b", "--radius", "3"])["count"], 5);
    assert_eq!(json(&["dist", "D8:a,b", "Dinf:a,b", "--rmax", "6"])["radius"], 3);
    let v = json(&["converge", "--family", "D{2k}:a,b", "--limit", "Dinf:a,b", "--range", "3..7"]);
    assert_eq!(v["report"]["verdict"]["kind"], "consistent-with-convergence");
    assert_eq!(json(&["limit-check", "Dih(Z x Z/6)"])["is_limit_of_dihedral"], true);
    assert_eq!(json(&["residual", "Z x Z/6", "--kill", "(1;0),(0;3)"])["target"], "Z/30");
    assert_eq!(json(&["check", "@P1", "--in", &fixture("a4.txt")])["holds"], false);
    assert_eq!(json(&["classify", &fixture("d12.json"), "--arity", "2"])["count"], 3);
    assert_eq!(json(&["classify", "Zm-dihedral", "--arity", "4"])["count"], 15);
    assert_eq!(json(&["cb-rank", "Dih(Z^3)", "--family", "dihedral"])["cb_rank"], 3);
    assert_eq!(json(&["recognize", &fixture("q8.txt")])["recognition"]["kind"], "no");
    let dot = mgs(&["closure-map", "--arity", "2", "--range", "3..4", "--dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn false_verdicts_exit_zero() {
    let out = mgs(&["limit-check", "Z/2 x Z/4"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_limit_of_cyclic"], false);
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        &["dist", "D7:a,b", "Dinf:a,b"][..],
        &["check", "forall x : x = ", "--in", "D6"],
        &["cb-rank", "Z/2 x Z/4", "--family", "cyclic"],
        &["closure-map", "--range", "2..5"],
    ] {
        let out = mgs(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn ball_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mgs"))
        .args(["ball", "Z^2:(1,0),(0,1)", "--radius", "6"])
        .env("MGS_BALL_CAP", "100")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
