use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const E1_TRI: &str = r#"{"dim":2,"vertices":[[0,0],[1,0],[0,1]],"maximal_simplices":[[0,1,2]]}"#;
const E1_RPS: &str = r#"{"codim":1,"cells":[
  {"simplex":[0,1],"base":"++","direction":["+-"]},
  {"simplex":[0,2],"base":"++","direction":["-+"]},
  {"simplex":[1,2],"base":"+-","direction":["--"]}]}"#;
/// E1 with the coset of [0, 1] directed along the edge.
const E1_BAD: &str = r#"{"codim":1,"cells":[
  {"simplex":[0,1],"base":"++","direction":["-+"]},
  {"simplex":[0,2],"base":"++","direction":["-+"]},
  {"simplex":[1,2],"base":"+-","direction":["--"]}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patchwork"))
        .args(args)
        .env("PATCHWORK_THREADS", "2")
        .output()
        .expect("run patchwork")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn schema_check(name: &str, value: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(value) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name} report violates its schema: {msgs:?}");
}

fn export_maxcurve(dir: &Path, d: &str) -> Value {
    json(&["maxcurve", d, "--census", "--export-dir", dir.to_str().unwrap()])
}

#[test]
fn maxcurve_census_at_degree_three() {
    let dir = tempfile::tempdir().unwrap();
    let r = export_maxcurve(dir.path(), "3");
    schema_check("maxcurve", &r);
    assert_eq!(r["components"], 11);
    assert_eq!(r["census"]["total"], 11);
    let c = &r["census"]["classified"];
    let got: Vec<i64> = ["horizontal", "transversal", "pure_join", "boundary_join", "axisless", "global"]
        .iter()
        .map(|k| c[k].as_i64().unwrap())
        .collect();
    assert_eq!(got, vec![1, 1, 2, 4, 2, 1]);
    assert_eq!(r["pass"], true);
}

#[test]
fn homology_of_e1() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", E1_TRI);
    let rps = write(dir.path(), "e.json", E1_RPS);
    let r = json(&["homology", &tri, &rps]);
    schema_check("homology", &r);
    assert_eq!(r["betti"], serde_json::json!([1, 1]));
    assert_eq!(r["components"], 1);
    let v = json(&["validate", &tri, &rps]);
    schema_check("validate", &v);
    assert_eq!(v["structure"]["valid"], true);
}

#[test]
fn bounds_on_floor_of_degree_two() {
    let dir = tempfile::tempdir().unwrap();
    export_maxcurve(dir.path(), "2");
    let tri = dir.path().join("triangulation.json");
    let r = json(&["bounds", tri.to_str().unwrap()]);
    schema_check("bounds", &r);
    assert_eq!(r["b1_graph"], 1);
    assert_eq!(r["harnack_bound"], 2);
    assert_eq!(r["curve_volume_bound"], 10);
    assert_eq!(r["planar"], true);
}

#[test]
fn intersect_reproduces_exported_curve() {
    let dir = tempfile::tempdir().unwrap();
    export_maxcurve(dir.path(), "2");
    let p = |n: &str| dir.path().join(n).display().to_string();
    let out = p("out.json");
    let r = json(&["intersect", &p("triangulation.json"), &p("signs.json"), &p("signs.json"), &p("orientation.json"), "-o", &out]);
    schema_check("intersect", &r);
    assert_eq!(r["valid"], true);
    assert_eq!(r["contained_in_first"], true);
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(p("curve.rps.json")).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn glued_betti_of_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", E1_TRI);
    let r = json(&["glued", &tri, "--betti"]);
    schema_check("glued", &r);
    assert_eq!(r["betti"], serde_json::json!([1, 1, 1]));
}

#[test]
fn exported_curve_has_one_group_per_component() {
    let dir = tempfile::tempdir().unwrap();
    export_maxcurve(dir.path(), "2");
    let obj = std::fs::read_to_string(dir.path().join("curve.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("g ")).count(), 2);
    assert!(obj.lines().any(|l| l.starts_with("l ")));
    let off = std::fs::read_to_string(dir.path().join("surface.off")).unwrap();
    assert!(off.starts_with("OFF\n"));
    // The export subcommand gives the same file as the directory export.
    let p = |n: &str| dir.path().join(n).display().to_string();
    let out = run(&["export", &p("triangulation.json"), &p("curve.rps.json"), "--format", "obj"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), obj);
}

#[test]
fn invalid_structure_exits_with_one_and_names_the_simplex() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", E1_TRI);
    let rps = write(dir.path(), "e.json", E1_BAD);
    let out = run(&["validate", &tri, &rps]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[0,1]"), "{err}");
}

#[test]
fn parse_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", r#"{"dim":2,"vertices":[[0,0]],"oops":1}"#);
    let out = run(&["glued", &tri]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t.json"));
    let out = run(&["glued", "/nonexistent/t.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_thread_setting_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_patchwork"))
        .args(["maxcurve", "1"])
        .env("PATCHWORK_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["maxcurve", "3", "--census", "--json"]);
    let b = Command::new(env!("CARGO_BIN_EXE_patchwork"))
        .args(["maxcurve", "3", "--census", "--json"])
        .env("PATCHWORK_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}
