//! End-to-end runs of the `fq` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fq")).args(args).env("FQ_DETERMINISTIC", "1").output().expect("fq runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = fq(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn gen_then_analyze_lens() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "lens.json", &["lens", "7", "3"]);
    let r = json(&fq(&["analyze", path.to_str().unwrap()]));
    assert_eq!(r["degree"], 7);
    assert_eq!(r["flat"], false);
    assert_eq!(r["quotient"]["euler_characteristic"], 1);
    assert_eq!(r["group"]["h1"]["text"], "Z_7");
    assert_eq!(r["group"]["triviality"], "nontrivial");
    assert_eq!(r["lens_shell"], 7);
    assert_eq!(r["manifold"]["is_manifold"], true);
    assert_eq!(r["tool"]["name"], "fq");
}

#[test]
fn analyze_platonic_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let q = gen(dir.path(), "q.json", &["platonic", "quaternion"]);
    let r = json(&fq(&["analyze", q.to_str().unwrap()]));
    assert_eq!(r["group"]["h1"]["text"], "Z_2 ⊕ Z_2");
    assert_eq!(r["gamma"]["has_circuit"], true);
    let p = gen(dir.path(), "p.json", &["platonic", "poincare"]);
    let r = json(&fq(&["analyze", p.to_str().unwrap()]));
    assert_eq!(r["group"]["h1"]["text"], "0");
    assert_eq!(r["group"]["triviality"], "unknown");
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("undecided")));
}

#[test]
fn flat_simply_connected_scheme_is_flagged_as_claimed_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "s.json", &["trivial-sphere", "4"]);
    let r = json(&fq(&["analyze", path.to_str().unwrap()]));
    assert_eq!(r["surface"]["class"], "disk");
    let notes: Vec<&str> = r["notes"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.iter().any(|n| n.contains("claimed 3-sphere") && n.contains("not independently certified")));
}

#[test]
fn text_report_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "lens.json", &["lens", "5", "2"]);
    let out = dir.path().join("report.txt");
    let o = fq(&["analyze", path.to_str().unwrap(), "--format", "text", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("Z_5"), "{text}");
}

#[test]
fn gamma_exports_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "q.json", &["platonic", "quaternion"]);
    let o = fq(&["gamma", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("graph gamma {"));
    assert_eq!(dot.matches(" -- ").count(), 4);
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn contract_along_gamma_tree_and_listed_edges() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "q.json", &["platonic", "quaternion"]);
    let r = json(&fq(&["contract", path.to_str().unwrap()]));
    let d = &r["deformation"];
    assert_eq!(d["strategy"], "gamma-tree");
    assert_eq!(d["nonflat_circles"], 3);
    assert_eq!(d["euler_preserved"], true);
    assert_eq!(d["h1_preserved"], true);

    let path = gen(dir.path(), "s.json", &["trivial-sphere", "3"]);
    let r = json(&fq(&["contract", path.to_str().unwrap(), "--edges", "0,1"]));
    assert_eq!(r["deformation"]["result"]["vertices"], 1);
    assert_eq!(r["deformation"]["induced"]["triviality"], "trivial");
}

#[test]
fn contracting_a_loop_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "lens.json", &["lens", "5", "2"]);
    let o = fq(&["contract", path.to_str().unwrap(), "--edges", "0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("loop"));
}

#[test]
fn fuzz_writes_summary_runs_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fuzz");
    let o = fq(&["fuzz", "--base", "tetrahedron", "--count", "50", "--out", out.to_str().unwrap()]);
    let summary = json(&o);
    assert_eq!(summary["count"], 50);
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(on_disk, summary);
    let csv = std::fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
    let violations = summary["violations"].as_array().unwrap();
    for v in violations {
        let name = format!("violation_{}_tetrahedron_{}.json", v["kind"].as_str().unwrap(), v["seed"]);
        let w = out.join(&name);
        assert!(w.exists(), "{name}");
        let o = fq(&["analyze", w.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // missing file
    assert_eq!(code(&fq(&["analyze", dir.path().join("nope.json").to_str().unwrap()])), 1);
    // malformed json
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&fq(&["analyze", bad.to_str().unwrap()])), 2);
    // structurally invalid: a face paired with itself
    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"vertices":["a","b"],"edges":[[0,1],[0,1]],"faces":[[1,-2],[2,-1]],"pairing":[{"a":0,"b":0,"offset":0,"reversed":false}]}"#,
    )
    .unwrap();
    let o = fq(&["analyze", invalid.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid scheme"));
    assert_eq!(code(&fq(&["gamma", invalid.to_str().unwrap()])), 2);
    // bad generator parameters
    assert_eq!(code(&fq(&["gen", "lens", "6", "2"])), 2);
    assert_eq!(code(&fq(&["gen", "random", "--base", "prism", "--seed", "1"])), 2);
    // usage
    assert_eq!(code(&fq(&["fuzz", "--base", "cube", "--count", "0"])), 2);
    assert_eq!(code(&fq(&[])), 2);
}

#[test]
fn generated_schemes_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.json", &["random", "--base", "cube", "--seed", "42"]);
    let text = std::fs::read_to_string(&a).unwrap();
    let o = fq(&["gen", "random", "--base", "cube", "--seed", "42"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), text);
    let scheme = facepair::FacePairingScheme::from_json(&text).unwrap();
    assert_eq!(scheme.to_json() + "\n", text);
}
