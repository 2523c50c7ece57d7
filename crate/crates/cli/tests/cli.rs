use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn racah(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racah"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn build_writes_a_module() {
    let dir = tempfile::tempdir().unwrap();
    let o = racah(&["build", "E:d=3,a=2,b=3,c=7", "-o", "m.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(v["dim"], 4);
    for key in ["t0", "t1", "t0v", "t1v"] {
        let rows = v[key].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 4));
    }
    assert_eq!(v["t0"][1][2], "4");
}

#[test]
fn build_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let o = racah(&["build", "E:d=2,a=1,b=1,c=1"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("d must be odd for family E"));
    assert_eq!(code(&racah(&["build", "E:d=3,a=x,b=1,c=1"], dir.path())), 2);
    assert_eq!(code(&racah(&["build", "Q:d=3,a=1,b=1,c=1"], dir.path())), 2);
    assert_eq!(code(&racah(&["frobnicate"], dir.path())), 2);
}

#[test]
fn build_racah_module() {
    let dir = tempfile::tempdir().unwrap();
    let o = racah(&["build", "R:d=0,a=1,b=0,c=0", "-o", "r.json"], dir.path());
    assert_eq!(code(&o), 0);
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["A"], serde_json::json!([["2"]]));
    assert_eq!(code(&racah(&["verify", "r.json"], dir.path())), 0);
}

#[test]
fn verify_fresh_and_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&racah(
            &["build", "E:d=3,a=2,b=3,c=7", "-o", "m.json"],
            dir.path()
        )),
        0
    );
    let o = racah(&["verify", "m.json"], dir.path());
    assert_eq!(code(&o), 0);
    let rep = stdout_json(&o);
    assert_eq!(rep["ok"], true);
    assert_eq!(
        rep["central_squares"],
        serde_json::json!(["4", "4", "9", "49"])
    );

    let mut v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    v["t1"][0][3] = Value::String("5".into());
    fs::write(dir.path().join("bad.json"), v.to_string()).unwrap();
    let o = racah(&["verify", "bad.json"], dir.path());
    assert_eq!(code(&o), 1);
    let rep = stdout_json(&o);
    assert_eq!(rep["ok"], false);
    assert!(!rep["violations"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("t0+t1+t0v+t1v+1"));
}

#[test]
fn verify_reports_o0_scalar() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&racah(
            &["build", "O:d=0,a=1,b=1,c=1", "-o", "o.json"],
            dir.path()
        )),
        0
    );
    let o = racah(&["verify", "o.json"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["central_squares"][0], "25/16");
}

#[test]
fn verify_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("junk.json"), "{not json").unwrap();
    assert_eq!(code(&racah(&["verify", "junk.json"], dir.path())), 2);
    fs::write(
        dir.path().join("shape.json"),
        r#"{"t0":[["1"]],"t1":[["1","2"]],"t0v":[["1"]],"t1v":[["1"]]}"#,
    )
    .unwrap();
    assert_eq!(code(&racah(&["verify", "shape.json"], dir.path())), 2);
    fs::write(dir.path().join("other.json"), r#"{"x":1}"#).unwrap();
    assert_eq!(code(&racah(&["verify", "other.json"], dir.path())), 2);
    assert_eq!(code(&racah(&["verify", "missing.json"], dir.path())), 2);
}

#[test]
fn lattice_matches_predictions() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, shape) in [
        ("O:d=2,a=1,b=1,c=-1/2", "chain4"),
        ("E:d=3,a=2,b=3,c=7", "diamond"),
    ] {
        let o = racah(&["--json", "lattice", spec, "--expect"], dir.path());
        assert_eq!(
            code(&o),
            0,
            "{spec}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(stdout_json(&o)["shape"], shape);
    }
    let o = racah(
        &["lattice", "E:d=3,a=0,b=3,c=1,eps=+-", "--expect"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("shape chain3"));
}

#[test]
fn lattice_guards() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&racah(&["lattice", "R:d=2,a=1,b=1,c=1"], dir.path())),
        2
    );
    assert_eq!(
        code(&racah(&["lattice", "E:d=3,a=1,b=1,c=1"], dir.path())),
        3
    );
    assert_eq!(code(&racah(&["lattice", "O:d=2,a=1,b=1,c"], dir.path())), 2);
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--dmax", "5", "--trials", "12", "--seed", "7"];
    let a = racah(&args, dir.path());
    let b = racah(&args, dir.path());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout_json(&a);
    assert_eq!(s["trials"], 12);
    assert_eq!(s["passed"], 12);
    assert_eq!(s["failures"], serde_json::json!([]));
}

#[test]
fn sweep_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = racah(
        &["sweep", "--trials", "1", "--seed", "1", "--dmax", "1"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let o = racah(
        &[
            "sweep",
            "--families",
            "O",
            "--dmax",
            "4",
            "--trials",
            "3",
            "-o",
            "s.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let s: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(s["passed"], 3);
    let o = racah(
        &[
            "sweep",
            "--families",
            "E",
            "--twists=--,+-",
            "--dmax",
            "3",
            "--trials",
            "4",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&racah(&["sweep", "--trials", "0"], dir.path())), 2);
    assert_eq!(code(&racah(&["sweep", "--families", "R"], dir.path())), 2);
}
