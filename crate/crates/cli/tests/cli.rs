use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn succinct(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_succinct")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn encode_decode_golden() {
    let d = tempfile::tempdir().unwrap();
    let out = succinct(d.path(), &["num", "encode", "--class", "C_3", "-6/3,2/-7", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["bits"], "1011001101010111");
    let back = succinct(d.path(), &["num", "decode", "1011001101010111", "--class", "C_3", "--format", "json"]);
    assert_eq!(json(&back)["value"], "-2-2/7i");
}

#[test]
fn ratio_widens_the_class() {
    let d = tempfile::tempdir().unwrap();
    let out = succinct(d.path(), &["num", "ratio", "3", "-2", "--class", "Q_2", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["class"], "Q_4");
    assert_eq!(v["value"], "-3/2");
}

#[test]
fn yes_fixture_verifies_and_no_fixture_rejects() {
    let d = tempfile::tempdir().unwrap();
    assert!(succinct(d.path(), &["fixture", "yes", "--qubits", "3", "--seed", "4", "--dir", "y"]).status.success());
    let idx: Value = serde_json::from_str(&fs::read_to_string(d.path().join("y/fixture.json")).unwrap()).unwrap();
    let x_star = idx["items"][0]["x_star"].as_str().unwrap();
    let out = succinct(
        d.path(),
        &["verify", "--ham", "y/yes.ham", "--state", "y/yes.state", "--lambda", "0", "--x-star", x_star, "--trials", "12", "--format", "json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["decision"], "accept");

    assert!(succinct(d.path(), &["fixture", "no", "--qubits", "3", "--seed", "4", "--dir", "n"]).status.success());
    let out = succinct(d.path(), &["verify", "--ham", "n/no-energy.ham", "--state", "n/no-energy.state", "--lambda", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["decision"], "reject_energy");
}

#[test]
fn sparse6_build_passes_its_audit_and_oracle_agrees() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("c.txt"), "REG 2 0 1 0\nTOF 1 2 3\n").unwrap();
    let out = succinct(d.path(), &["ham", "build", "--variant", "sparse6", "--circuit", "c.txt", "--x", "11", "--out", "h.ham", "--history", "eta.state", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["history_annihilated"], true);
    assert_eq!(v["terms_psd"], true);
    let out = succinct(d.path(), &["oracle", "check", "--ham", "h.ham", "--state", "eta.state", "--lambda", "0", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["eigen_mismatches"], 0);
    assert!(v["ground_energy"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn four_local_build_reports_the_failed_audit() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("c.txt"), "REG 2 0 1 0\nTOF 1 2 3\nTOF 1 2 3\n").unwrap();
    let out = succinct(d.path(), &["ham", "build", "--variant", "4local", "--circuit", "c.txt", "--x", "11", "--out", "h.ham", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["history_annihilated"], false);
    assert_eq!(v["terms_stoquastic"], true);
}

#[test]
fn circuit_rewrites() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("c.txt"), "REG 3 0 0 0\nTOF 1 2 3\nX 1\nCNOT 1 2\n").unwrap();
    let out = succinct(d.path(), &["circuit", "preidle", "c.txt", "--format", "json"]);
    assert_eq!(json(&out)["gates_out"], 3);
    let out = succinct(d.path(), &["circuit", "sparsify", "c.txt", "--unit-slots", "--format", "json"]);
    assert_eq!(json(&out)["gates_out"], 15);
    let out = succinct(d.path(), &["circuit", "decompose", "c.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Toffoli") || stderr(&out).contains("gate 2"), "{}", stderr(&out));
}

#[test]
fn state_query_reads_history_amplitudes() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("c.txt"), "REG 2 0 1 0\nTOF 1 2 3\n").unwrap();
    let out = succinct(d.path(), &["state", "query", "--circuit", "c.txt", "--x", "11", "1100", "1111", "0000", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["amplitudes"]["1111"], json(&out)["amplitudes"]["1100"]);
    assert_eq!(v["amplitudes"]["0000"], "0");
}

const PIPELINE: &str = r#"{ "schema": "succinct-pipeline/1", "seed": 3,
  "steps": [
    { "op": "fixture", "kind": "yes", "qubits": 3, "dir": "fx" },
    { "op": "oracle", "ham": "fx/yes.ham", "state": "fx/yes.state", "lambda": "0" },
    { "op": "transform", "transform": "fixednode", "ham": "fx/yes.ham", "state": "fx/yes.state", "out": "fx/f.ham" },
    { "op": "verify", "ham": "fx/yes.ham", "state": "fx/yes.state", "lambda": "0", "a": "1/4", "b": "1/2", "trials": 8, "out": "fx/verdict.json" }
  ] }"#;

#[test]
fn encode_only_manifest() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("m.json"), r#"{ "schema": "succinct-pipeline/1", "steps": [ { "op": "encode", "value": "-6/3,2/-7", "class": "C_3" } ] }"#).unwrap();
    let out = succinct(d.path(), &["run", "m.json", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json(&out)["steps"][0]["report"]["bits"], "1011001101010111");
}

#[test]
fn yes_pipeline_accepts_and_is_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("m.json"), PIPELINE).unwrap();
    let first = succinct(d.path(), &["run", "m.json", "--format", "json"]);
    assert!(first.status.success(), "{}{}", stderr(&first), String::from_utf8_lossy(&first.stdout));
    let files = ["fx/yes.ham", "fx/yes.state", "fx/f.ham", "fx/verdict.json"].map(|f| fs::read(d.path().join(f)).unwrap());
    let second = succinct(d.path(), &["run", "m.json", "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);
    for (f, bytes) in ["fx/yes.ham", "fx/yes.state", "fx/f.ham", "fx/verdict.json"].iter().zip(&files) {
        assert_eq!(&fs::read(d.path().join(f)).unwrap(), bytes, "{f}");
    }
}

#[test]
fn corrupted_hamfile_names_the_step() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("m.json"), PIPELINE).unwrap();
    assert!(succinct(d.path(), &["run", "m.json"]).status.success());
    let m = PIPELINE.replace(r#"{ "op": "fixture", "kind": "yes", "qubits": 3, "dir": "fx" },"#, "");
    fs::write(d.path().join("m2.json"), m).unwrap();
    fs::write(d.path().join("fx/yes.ham"), "HAM qubits=3 class=Q_2\nENTRY 000 000 1\nENTRY 00 1 1\n").unwrap();
    let out = succinct(d.path(), &["run", "m2.json"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr(&out);
    assert!(e.contains("step 1 (oracle)") && e.contains("line 2"), "{e}");
}

#[test]
fn unknown_schema_is_refused() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("m.json"), r#"{ "schema": "succinct-pipeline/9", "steps": [] }"#).unwrap();
    let out = succinct(d.path(), &["run", "m.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported schema"));
}
