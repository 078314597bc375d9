use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-ce")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("hecke-ce-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

const HEISENBERG: &str = r#"{
  "ring": {"tag": "PLocal", "p": 3},
  "basis": [
    {"name": "a", "degree": 0, "weight": 1},
    {"name": "b", "degree": 0, "weight": 1},
    {"name": "c", "degree": 0, "weight": 2}
  ],
  "bracket": [{"a": "a", "b": "b", "out": [{"basis": "c", "coeff": 1}]}]
}"#;

#[test]
fn euclidean_compare_matches() {
    let o = run(&["euclidean", "--n", "3", "--k", "0", "--p", "3", "--compare"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("match"));
}

#[test]
fn negative_sphere_dimension_parses() {
    let o = run(&["euclidean", "--n", "2", "--k", "-1", "--p", "3", "--compare"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn betti_numbers() {
    let o = run(&["betti", "--genus", "1", "--p", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1,2,4,4"), "{}", stdout(&o));
}

#[test]
fn honda_euler_poly_at_height_two() {
    let o = run(&["euler-poly", "--honda", "--p", "3", "--h", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "e^4");
}

#[test]
fn surface_compare() {
    let o = run(&["surface", "--genus", "1", "--p", "3", "--compare"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn lie_homology_json_is_deterministic() {
    let path = scratch("heis.json", HEISENBERG);
    let p = path.to_str().unwrap();
    let a = run(&["--format", "json", "lie-homology", "--input", p, "--max-weight", "4"]);
    let b = run(&["--format", "json", "lie-homology", "--input", p, "--max-weight", "4"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn malformed_input_reports_position() {
    let path = scratch("bad.json", "{\n  \"ring\": {\"type\": \"p_local\", \"p\": 3},\n  \"basis\": [\n}");
    let o = run(&["lie-homology", "--input", path.to_str().unwrap(), "--max-weight", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn invalid_bracket_is_rejected() {
    // An antisymmetric bracket on two odd elements violates graded symmetry.
    let body = r#"{"ring": {"tag": "PLocal", "p": 3},
      "basis": [{"name": "x", "degree": 1, "weight": 1}, {"name": "y", "degree": 1, "weight": 1}, {"name": "z", "degree": 2, "weight": 2}],
      "bracket": [{"a": "x", "b": "y", "out": [{"basis": "z", "coeff": 1}]}, {"a": "y", "b": "x", "out": [{"basis": "z", "coeff": -1}]}]}"#;
    let path = scratch("odd.json", body);
    let o = run(&["lie-homology", "--input", path.to_str().unwrap(), "--max-weight", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_criterion() {
    let o = run(&["compare", "--criterion", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("criterion 1: PASS"));
}
