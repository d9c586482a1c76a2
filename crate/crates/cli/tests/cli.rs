use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const SPHERE: &str = r#"{"generators":[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]}"#;
const SPHERE3: &str = r#"{"generators":[[1,2,3,4],[1,2,3,5],[1,2,4,5],[1,3,4,5],[2,3,4,5]]}"#;
const BALL: &str = r#"{"generators":[[1,2,3]]}"#;

fn stellar(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stellar"))
        .args(args)
        .env_remove("STELLAR_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn chi_of_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sphere.json", SPHERE);
    let out = stellar(&["chi", &f], None);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"chi\":2}\n");
}

#[test]
fn stdin_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s3.json", SPHERE3);
    for verb in ["chi", "boundary", "prism", "check", "structure", "collapse", "sphere-check"] {
        let a = stellar(&[verb, &f], None);
        let b = stellar(&[verb, "-"], Some(SPHERE3));
        assert!(a.status.success(), "{verb}");
        assert_eq!(a.stdout, b.stdout, "{verb}");
    }
}

#[test]
fn lens_pipe_into_degree() {
    let lens = stellar(&["lens", "5", "1"], None);
    assert!(lens.status.success());
    let text = String::from_utf8(lens.stdout).unwrap();
    let deg = stellar(&["degree", "-"], Some(&text));
    assert_eq!(json(&deg), serde_json::json!({"degree": [10, 2], "flat": false}));
    let h = stellar(&["h1", "-"], Some(&text));
    assert_eq!(json(&h)["torsion"], serde_json::json!([5]));
    let g = stellar(&["gamma", "-"], Some(&text));
    assert_eq!(json(&g)["single_cycle"], Value::Bool(true));
}

#[test]
fn emitted_json_round_trips() {
    let lens = stellar(&["lens", "3", "2"], None);
    let v = json(&lens);
    let reparsed: stellar_core::quotient::StellarStructure = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&reparsed).unwrap(), v);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s3.json", SPHERE3);
    let s = stellar(&["structure", &f], None);
    let text = String::from_utf8(s.stdout).unwrap();
    let again: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&again).unwrap() + "\n", text);
}

#[test]
fn structure_of_ball_is_open() {
    let out = stellar(&["structure", "-"], Some(BALL));
    assert!(out.status.success());
    assert_eq!(json(&out)["closed"], Value::Bool(false));
}

#[test]
fn moves_and_apply() {
    let sub = stellar(&["subdivide", "-", "--simplex", "1,2"], Some(SPHERE));
    assert!(sub.status.success());
    let text = String::from_utf8(sub.stdout).unwrap();
    let back = stellar(&["weld", "-", "--simplex", "[1,2]", "--vertex", "5"], Some(&text));
    assert_eq!(json(&back), serde_json::from_str::<Value>(SPHERE).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let moves = write(dir.path(), "moves.json", r#"[{"op":"subdivide","simplex":[1,2],"vertex":5},{"op":"weld","simplex":[1,2],"vertex":5}]"#);
    let out = stellar(&["apply", "-", &moves], Some(SPHERE));
    assert_eq!(json(&out), serde_json::from_str::<Value>(SPHERE).unwrap());
}

#[test]
fn outputs_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let lens = dir.path().join("lens.json");
    let dot = dir.path().join("gamma.dot");
    let out = stellar(&["lens", "4", "1", "--out", lens.to_str().unwrap()], None);
    assert!(out.status.success());
    let out = stellar(&["gamma", lens.to_str().unwrap(), "--dot", dot.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph gamma {"));
    let f = write(dir.path(), "s3.json", SPHERE3);
    let trace = dir.path().join("trace.json");
    let out = stellar(&["structure", &f, "--trace", trace.to_str().unwrap()], None);
    assert!(out.status.success());
    let t: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn classify_projective_plane() {
    let lens = stellar(&["lens", "2", "1"], None);
    let text = String::from_utf8(lens.stdout).unwrap();
    let out = stellar(&["classify", "-"], Some(&text));
    let v = json(&out);
    assert_eq!(v["kind"], "ProjectivePlane");
    assert_eq!(v["chi"], 1);
}

#[test]
fn seeded_search_is_reproducible() {
    let a = stellar(&["structure", "-", "--search", "2", "--seed", "5"], Some(SPHERE3));
    let b = stellar(&["structure", "-", "--search", "2", "--seed", "5"], Some(SPHERE3));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let unknown = stellar(&["frobnicate"], None);
    assert_eq!(unknown.status.code(), Some(2));
    let malformed = stellar(&["chi", "-"], Some("{\"generators\": [[2, 1]]}"));
    assert_eq!(malformed.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&malformed.stderr).unwrap();
    assert_eq!(err["kind"], "parse");
    let missing = stellar(&["chi", "/nonexistent/file.json"], None);
    assert_eq!(missing.status.code(), Some(2));
    let domain = stellar(&["lens", "4", "2"], None);
    assert_eq!(domain.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&domain.stderr).unwrap();
    assert_eq!(err["kind"], "invalid_lens_params");
    let open = stellar(&["sphere-check", "-"], Some(BALL));
    assert_eq!(open.status.code(), Some(1));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_stellar"))
        .args(["check", "-"])
        .env("STELLAR_BUDGET", "0")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(SPHERE3.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dimension"], 3);
}
