//! End-to-end tests of the `orbitmul` binary: exit codes, the documented
//! report lines, artifact files, and report determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn orbitmul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitmul"))
        .args(args)
        .env_remove("ORBITMUL_TOL")
        .output()
        .expect("binary launches")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

/// Every command's last stdout line is a compact machine-readable report.
fn last_json(out: &Output) -> Value {
    let text = stdout_of(out);
    let line = text.lines().last().expect("nonempty stdout");
    serde_json::from_str(line).expect("last line is JSON")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("artifact readable");
    serde_json::from_str(&text).expect("artifact is JSON")
}

#[test]
fn design_triangle_prints_exact_residuals() {
    let out = orbitmul(&["design", "triangle"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("s=3 n=2 residuals 0 0"),
        "unexpected report: {text}"
    );
    let json = last_json(&out);
    assert_eq!(json["s"], 3);
    assert_eq!(json["n"], 2);
    assert_eq!(json["ok"], true);
    assert_eq!(json["exact"], true);
    assert_eq!(json["scalar"], "quad(3)");
}

#[test]
fn design_polygon_with_two_vertices_is_a_usage_error() {
    let out = orbitmul(&["design", "polygon", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn design_simplex_writes_a_four_vector_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("simplex3.json");
    let out = orbitmul(&["design", "simplex", "--n", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let artifact = read_json(&path);
    assert_eq!(artifact["n"], 3);
    assert_eq!(artifact["vectors"].as_array().unwrap().len(), 4);
}

#[test]
fn design_polygon_is_verified_in_float() {
    for m in ["3", "5", "8"] {
        let out = orbitmul(&["design", "polygon", "--m", m]);
        assert_eq!(out.status.code(), Some(0), "polygon --m {m}");
        let json = last_json(&out);
        assert_eq!(json["exact"], false);
        assert!(json["sum_residual"].as_f64().unwrap() <= 1e-12);
        assert!(json["outer_residual"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn trivial_orbit_fails_verification_with_exit_1() {
    // Rotation by 2*pi is the identity, so the orbit is the seed alone and
    // cannot sum to zero.
    let out = orbitmul(&["design", "orbit", "--rotation", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(last_json(&out)["ok"], false);
}

#[test]
fn orbit_without_generator_choice_is_a_usage_error() {
    let out = orbitmul(&["design", "orbit"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symmetric_orbit_reproduces_the_simplex_design() {
    let dir = tempfile::tempdir().unwrap();
    let orbit_path = dir.path().join("orbit.json");
    let simplex_path = dir.path().join("simplex.json");
    let out = orbitmul(&[
        "design",
        "orbit",
        "--symmetric",
        "4",
        "-o",
        orbit_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = orbitmul(&["design", "simplex", "--n", "3", "-o", simplex_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let orbit = read_json(&orbit_path);
    let simplex = read_json(&simplex_path);
    // Same vectors as sets (serialized orbits are canonically sorted).
    let mut orbit_vecs: Vec<String> = orbit["vectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(Value::to_string)
        .collect();
    let mut simplex_vecs: Vec<String> = simplex["vectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(Value::to_string)
        .collect();
    orbit_vecs.sort();
    simplex_vecs.sort();
    assert_eq!(orbit_vecs, simplex_vecs);
}

#[test]
fn decomp_triangle_verifies_with_seven_terms() {
    let out = orbitmul(&["decomp", "--design", "triangle", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("terms=7 residual=0"),
        "unexpected report: {text}"
    );
}

#[test]
fn decomp_builtin_strassen_verifies() {
    let out = orbitmul(&["decomp", "--builtin", "strassen", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("terms=7"));
    let json = last_json(&out);
    assert_eq!(json["scalar"], "rational");
    assert_eq!(json["residual"], 0.0);
}

#[test]
fn decomp_simplex3_has_25_terms_in_standard_rational_coordinates() {
    let out = orbitmul(&["decomp", "--design", "simplex3", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("terms=25"));
    let json = last_json(&out);
    assert_eq!(json["n"], 3);
    assert_eq!(json["scalar"], "rational");
    assert_eq!(json["exact"], true);
}

#[test]
fn decomp_requires_exactly_one_source() {
    assert_eq!(orbitmul(&["decomp"]).status.code(), Some(2));
    assert_eq!(
        orbitmul(&["decomp", "--design", "triangle", "--builtin", "strassen"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn design_file_feeds_decomp_and_multiply() {
    let dir = tempfile::tempdir().unwrap();
    let design_path = dir.path().join("design.json");
    let decomp_path = dir.path().join("decomp.json");
    let out = orbitmul(&["design", "simplex", "--n", "2", "-o", design_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = orbitmul(&[
        "decomp",
        "--design",
        design_path.to_str().unwrap(),
        "--verify",
        "-o",
        decomp_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("terms=7 residual=0"));
    let out = orbitmul(&[
        "multiply",
        "--decomp",
        decomp_path.to_str().unwrap(),
        "--size",
        "4",
        "--recursive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("mults=49 naive=64 match=yes"));
}

#[test]
fn exported_decomposition_file_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    // Export, re-import the file, export again: identical bytes.
    let out = orbitmul(&["decomp", "--design", "triangle", "-o", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = orbitmul(&[
        "multiply",
        "--decomp",
        first.to_str().unwrap(),
        "--size",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = read_json(&first);
    assert_eq!(json["provenance"], "design decomposition (s=3, n=2)");
    // A second export of the same artifact is byte-identical.
    let out = orbitmul(&["decomp", "--design", "triangle", "-o", second.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}

#[test]
fn multiply_examples_match_documented_counts() {
    let out = orbitmul(&["multiply", "--decomp", "strassen", "--size", "4", "--recursive"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("mults=49 naive=64 match=yes"));

    let out = orbitmul(&["multiply", "--decomp", "strassen", "--size", "8", "--recursive"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("mults=343 naive=512"));

    let out = orbitmul(&["multiply", "--decomp", "simplex3", "--size", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("mults=25 naive=27 match=yes"));
}

#[test]
fn multiply_without_recursive_rejects_other_sizes() {
    let out = orbitmul(&["multiply", "--decomp", "strassen", "--size", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn multiply_reports_are_byte_identical_across_runs() {
    let args = ["multiply", "--decomp", "strassen", "--size", "4", "--recursive", "--seed", "7"];
    let first = orbitmul(&args);
    let second = orbitmul(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let args = ["design", "polygon", "--m", "6"];
    assert_eq!(orbitmul(&args).stdout, orbitmul(&args).stdout);

    let args = ["decomp", "--design", "simplex2", "--verify"];
    assert_eq!(orbitmul(&args).stdout, orbitmul(&args).stdout);
}

#[test]
fn bench_reports_recursive_counts_and_decreasing_ratio() {
    let out = orbitmul(&["bench", "--decomp", "strassen", "--sizes", "2,4,8"]);
    assert_eq!(out.status.code(), Some(0));
    let json = last_json(&out);
    let rows = json["rows"].as_array().unwrap();
    let mults: Vec<u64> = rows.iter().map(|r| r["mults"].as_u64().unwrap()).collect();
    let naive: Vec<u64> = rows.iter().map(|r| r["naive"].as_u64().unwrap()).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r["ratio"].as_f64().unwrap()).collect();
    assert_eq!(mults, vec![7, 49, 343]);
    assert_eq!(naive, vec![8, 64, 512]);
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "ratio not decreasing: {ratios:?}");
}

#[test]
fn bench_rejects_malformed_sizes() {
    assert_eq!(
        orbitmul(&["bench", "--decomp", "strassen", "--sizes", "2,x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        orbitmul(&["bench", "--decomp", "strassen", "--sizes", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn tolerance_env_var_is_honored_and_validated() {
    // An impossible tolerance makes the float polygon fail verification.
    let out = Command::new(env!("CARGO_BIN_EXE_orbitmul"))
        .args(["design", "polygon", "--m", "5"])
        .env("ORBITMUL_TOL", "1e-20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // The --tol flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_orbitmul"))
        .args(["--tol", "1e-9", "design", "polygon", "--m", "5"])
        .env("ORBITMUL_TOL", "1e-20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // A malformed value is a usage error.
    let out = Command::new(env!("CARGO_BIN_EXE_orbitmul"))
        .args(["design", "triangle"])
        .env("ORBITMUL_TOL", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_builtin_names_are_usage_errors() {
    assert_eq!(
        orbitmul(&["multiply", "--decomp", "laderman", "--size", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        orbitmul(&["decomp", "--design", "simplex"]).status.code(),
        Some(2)
    );
}
