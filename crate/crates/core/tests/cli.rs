use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn glued_cd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glued-cd")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const PATH3: &str = r#"{"points": ["a", "b", "c"], "edges": [["a", "b", 1.0], ["b", "c", 1.0]], "boundary": ["a", "c"]}"#;

#[test]
fn double_of_a_path_is_a_square() {
    let dir = TempDir::new().unwrap();
    let space = write(dir.path(), "path.json", PATH3);
    let out_dir = dir.path().join("out");
    let out = glued_cd(&["double", "--space", &space, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let double: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("double.json")).unwrap()).unwrap();
    let points: Vec<&str> = double["points"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(points.len(), 4);
    let b = points.iter().position(|&p| p == "b").unwrap();
    let b1 = points.iter().position(|&p| p == "b#1").unwrap();
    assert_eq!(double["dist"][b][b1].as_f64(), Some(2.0));
    assert_eq!(double["provenance"].as_array().unwrap().len(), 6);
}

#[test]
fn mcp_threshold_and_scalar_test() {
    let out = glued_cd(&["check-mcp", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let thr = json(&out)["threshold"].as_f64().unwrap();
    assert!((thr - 0.844834).abs() < 1e-5);
    let eps = format!("{}", 8.0 / 9.0 * thr);
    assert_eq!(glued_cd(&["check-mcp", "--N", "4", "--theta", &eps]).status.code(), Some(0));
    let beyond = format!("{}", 1.25 * 8.0 / 9.0 * thr);
    let out = glued_cd(&["check-mcp", "--N", "4", "--theta", &beyond]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn check_cd_on_a_generated_segment() {
    let dir = TempDir::new().unwrap();
    let mu0 = write(dir.path(), "mu0.json", r#"{"s0": 0.5, "s1": 0.5}"#);
    let mu1 = write(dir.path(), "mu1.json", r#"{"s8": 0.5, "s9": 0.5}"#);
    let args = ["check-cd", "--space", "gen:segment:10:1.0", "--mu0", &mu0, "--mu1", &mu1, "--K", "0", "--N", "3"];
    let out = glued_cd(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["check"], "cd");
    let mut reduced = args.to_vec();
    reduced.extend(["--variant", "reduced"]);
    assert_eq!(json(&glued_cd(&reduced))["check"], "cd_reduced");
}

#[test]
fn needle_and_semiconcave_from_files() {
    let dir = TempDir::new().unwrap();
    // trapezoid weights give a constant density up to the ends
    let space = write(
        dir.path(),
        "trap.json",
        r#"{"points": ["s0", "s1", "s2", "s3", "s4"],
            "edges": [["s0", "s1", 0.25], ["s1", "s2", 0.25], ["s2", "s3", 0.25], ["s3", "s4", 0.25]],
            "weight": [0.125, 0.25, 0.25, 0.25, 0.125]}"#,
    );
    let guide = write(dir.path(), "u.json", r#"{"s0": 0.0, "s1": 0.25, "s2": 0.5, "s3": 0.75, "s4": 1.0}"#);
    let out_dir = dir.path().join("needles");
    let out = glued_cd(&["needle", "--space", &space, "--guide", &guide, "--K", "0", "--N", "2", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = fs::read_to_string(out_dir.join("needles_0.csv")).unwrap();
    assert!(csv.starts_with("chain_id,node_id,arclength,u,weight,h"));
    assert_eq!(csv.lines().count(), 6);

    let field: String = format!(
        "{{{}}}",
        (0..11).map(|i| format!("\"s{i}\": {}", (i as f64 / 10.0).powi(2) - i as f64 / 10.0)).collect::<Vec<_>>().join(", ")
    );
    let field = write(dir.path(), "phi.json", &field);
    let normals = write(dir.path(), "normals.json", r#"[["s0", "s1", "s2"], ["s10", "s9", "s8"]]"#);
    let out = glued_cd(&["semiconcave", "--space", "gen:segment:11:1.0", "--field", &field, "--normals", &normals, "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bad_invocations() {
    assert_eq!(glued_cd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(glued_cd(&["check-mcp"]).status.code(), Some(3));
    assert_eq!(glued_cd(&["validate", "--space", "/nonexistent/space.json"]).status.code(), Some(3));
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"points": ["a", "b"], "dist": [[0, 1], [2, 0]]}"#);
    let out = glued_cd(&["validate", "--space", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let d = dir.path().join(name);
        let out = glued_cd(&["example-cylinder", "--N", "4", "--arc-points", "16", "--ring-points", "6", "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let mut files: Vec<_> = fs::read_dir(&d).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        (out.stdout, files.iter().map(|f| fs::read(f).unwrap()).collect::<Vec<_>>())
    };
    assert_eq!(run("a"), run("b"));
}
