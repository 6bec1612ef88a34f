//! End-to-end runs of the `modring` binary.

use std::path::Path;
use std::process::{Command, Output};

use modring::report::{ringoid_from_report, EnvelopeReport};
use modring::ringoid::enveloping_ringoid;
use serde_json::Value;

fn modring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modring")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn envelope_report_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c3.json");
    let o = modring(&["envelope", "--algebra", "builtin:C3", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rep: EnvelopeReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(rep.stabilized);
    assert_eq!(rep.variety, "groups");
    let e = modring::fleet::entry("C3").unwrap();
    let env = enveloping_ringoid(&e.variety, e.algebra.clone(), 3, 8).unwrap();
    assert_eq!(ringoid_from_report(&rep.ringoid).unwrap(), env.ringoid().smith_form());
    // the summary names the stabilized depth
    assert!(String::from_utf8_lossy(&o.stdout).contains(&rep.depth.to_string()));
}

#[test]
fn report_goes_to_stdout_without_output() {
    let o = modring(&["envelope", "--algebra", "builtin:Z2", "--variety", "ab"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["algebra"], "Z2");
}

#[test]
fn unstabilized_envelope_exits_3() {
    let o = modring(&["envelope", "--algebra", "builtin:Z2", "--variety", "ab", "--max-depth", "4"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn unreadable_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&modring(&["envelope", "--algebra", missing.to_str().unwrap()])), 1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": \"broken\", \"carrier\": [").unwrap();
    let o = modring(&["check-total", "--algebra", bad.to_str().unwrap(), "--variety", "groups"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn algebra_outside_the_variety_exits_2() {
    let o = modring(&["check-total", "--algebra", "builtin:Z2ring", "--variety", "groups"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn modulize_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = modring(&["modulize", "--overalgebra", "builtin:C2/beta* top", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = read(&out);
    let fibers = v["fibers"].as_array().unwrap();
    assert_eq!(fibers.len(), 2);
    for f in fibers {
        assert_eq!(f["points"].as_array().unwrap().len(), 2);
        assert_eq!(f["eta"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn modulize_rejects_overalgebra_outside_the_variety() {
    let (p, _) = modring::io::load_overalg("builtin:C2/beta* top").unwrap();
    let mut v = modring::io::overalg_to_value(&p);
    // inversion collapses the fiber over e, so x * x^-1 = e fails
    v["ops"]["inv"]["e"] = serde_json::json!(["(e,e)", "(e,e)"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = modring(&["modulize", "--overalgebra", path.to_str().unwrap(), "--variety", "groups"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("not totally in groups"), "{}", stderr(&o));
    assert!(stderr(&o).contains("fails at"));
    let o = modring(&["check-total", "--overalgebra", path.to_str().unwrap(), "--variety", "groups"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn zmod_and_total_on_builtin_modules() {
    let o = modring(&["zmod", "--module", "builtin:C2/Z4 sign"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["homs"].as_array().unwrap().len(), 4);
    let o = modring(&["total", "--module", "builtin:C2/Z4 sign"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["algebra"]["carrier"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_with_injected_fault_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = modring(&["verify", "--inject-fault", "--samples", "5", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let v = read(&out);
    assert!(v["failed"].as_u64().unwrap() > 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("faulty"));
}
