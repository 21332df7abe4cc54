//! End-to-end tests through the argv entry point: every subcommand, both
//! output modes, the exit-code contract, and byte-level determinism.

use std::fs;
use std::path::PathBuf;

use serde_json::Value;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = isopar_cli::run(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("stdout is utf-8"),
        String::from_utf8(err).expect("stderr is utf-8"),
    )
}

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).expect("temp files are writable");
    path
}

fn a4_spec(dir: &tempfile::TempDir) -> PathBuf {
    let spec = isopar_core::rootsys::SpaceSpec::single(isopar_core::rootsys::Family::A, 4);
    write_file(dir, "a4.json", &serde_json::to_string(&spec).unwrap())
}

const PLANE: &str = r#"{"vectors": [["1","0","0","0","-1"], ["0","1","0","-1","0"]]}"#;
const HDELTA_LINE: &str = r#"{"vectors": [["2","1","0","-1","-2"]]}"#;

#[test]
fn build_reports_the_datum() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let (code, out, err) = run_cli(&["isopar", "build", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(out.contains("label: A4"));
    assert!(out.contains("rank: 4"));
    assert!(out.contains("axioms: ok"));

    let (code, out, _) =
        run_cli(&["isopar", "build", "--spec", spec.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).expect("valid json");
    assert_eq!(v["schema"], "1");
    assert_eq!(v["command"], "build");
    assert_eq!(v["positive_count"], 10);
    assert_eq!(v["total_multiplicity"], 10);
    assert_eq!(v["axioms_passed"], true);
    assert_eq!(v["hdelta"][0], "2");
}

#[test]
fn presets_work_as_spec_sources() {
    let (code, out, _) = run_cli(&["isopar", "build", "--preset", "(rh2)^3", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["label"], "A1+A1+A1");
    assert_eq!(v["rank"], 3);

    let (code, _, err) = run_cli(&["isopar", "build", "--preset", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown preset"));
}

#[test]
fn analyze_reports_the_reference_plane() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let plane = write_file(&dir, "plane.json", PLANE);
    let args = [
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        plane.to_str().unwrap(),
        "--xi",
        "1,0,-2,0,1",
        "--t",
        "1/2",
        "--json",
    ];
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "stderr: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["minimal"], true);
    assert_eq!(v["austere"], true);
    assert!(v["austere_witness"]["pairs"].is_array());
    assert_eq!(v["subspace"]["codim"], 2);
    assert_eq!(v["focal"]["xi_norm_sq"], "6");
    assert_eq!(v["focal"]["trace"], "0");
    assert_eq!(v["cmc_per_radius"]["radial_directions"], 1);
    assert_eq!(v["cmc_per_radius"]["value"], "-2");
    assert_eq!(v["tube"]["trace"], "-2");
    let tube_total: u64 = v["tube"]["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["mult"].as_u64().unwrap())
        .sum();
    assert_eq!(tube_total, 13); // 1 radial + 2 zeros + 10 root lines
    assert_eq!(v["cpc"]["value"], false);
    assert!(v["cpc"]["witness"]["root"].is_u64());
    assert_ne!(v["cpc"]["witness"]["value1"], v["cpc"]["witness"]["value2"]);

    // identical invocations must produce identical bytes
    let (_, out2, _) = run_cli(&args);
    assert_eq!(out, out2);
}

#[test]
fn analyze_half_sum_line_prints_the_formula_operands() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let line = write_file(&dir, "line.json", HDELTA_LINE);
    let (code, out, _) = run_cli(&[
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        line.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("minimal: true"));
    assert!(out.contains("austere: false"));
    // codim 3, so the per-radius mean curvature is -2/t with both operands shown
    assert!(out.contains("-(codim - 1)/t with codim = 3 so -2/t"), "{out}");

    let (code, out, _) = run_cli(&[
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        line.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["focal"]["symbolic"], true);
    assert_eq!(v["cmc_per_radius"]["codim"], 3);
    assert_eq!(v["cmc_per_radius"]["radial_directions"], 2);
    assert_eq!(v["tube"], Value::Null);
    assert_eq!(v["cpc"]["value"], false);
}

#[test]
fn error_paths_exit_two_with_no_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let plane = write_file(&dir, "plane.json", PLANE);

    // missing file
    let (code, out, err) = run_cli(&["isopar", "build", "--spec", "/nonexistent.json", "--json"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("cannot read"));

    // malformed subspace file
    let bad = write_file(&dir, "bad.json", r#"{"vectors": [["one"]]}"#);
    let (code, out, _) = run_cli(&[
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        bad.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());

    // --t without --xi is rejected by flag validation
    let (code, out, _) = run_cli(&[
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        plane.to_str().unwrap(),
        "--t",
        "1/2",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());

    // xi inside the subspace violates the normality precondition
    let (code, out, err) = run_cli(&[
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        plane.to_str().unwrap(),
        "--xi",
        "1,0,0,0,-1",
        "--json",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(!err.is_empty());

    // nonpositive tube radius
    let (code, out, _) = run_cli(&[
        "isopar",
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--subspace",
        plane.to_str().unwrap(),
        "--xi",
        "1,0,-2,0,1",
        "--t",
        "0",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());

    // out-of-range codimension for genericity
    let (code, out, err) = run_cli(&[
        "isopar",
        "genericity",
        "--spec",
        spec.to_str().unwrap(),
        "--codim",
        "9",
        "--count",
        "5",
        "--json",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("codimension"));

    // unknown subcommand
    let (code, _, _) = run_cli(&["isopar", "frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn congruence_decides_the_plane_pair() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let b1 = write_file(
        &dir,
        "b1.json",
        r#"{"vectors": [["2","1","0","-1","-2"], ["1","-1","0","0","0"]]}"#,
    );
    let b2 = write_file(
        &dir,
        "b2.json",
        r#"{"vectors": [["2","1","0","-1","-2"], ["0","0","0","1","-1"]]}"#,
    );
    let b3 = write_file(
        &dir,
        "b3.json",
        r#"{"vectors": [["2","1","0","-1","-2"], ["0","1","-1","0","0"]]}"#,
    );
    let (code, out, err) = run_cli(&[
        "isopar",
        "congruence",
        "--spec",
        spec.to_str().unwrap(),
        "--b1",
        b1.to_str().unwrap(),
        "--b2",
        b2.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["congruent"], true);
    assert_eq!(v["symmetry_group_order"], 2);
    assert!(v["witness"]["matrix"].is_array());

    let (code, out, _) = run_cli(&[
        "isopar",
        "congruence",
        "--spec",
        spec.to_str().unwrap(),
        "--b1",
        b1.to_str().unwrap(),
        "--b2",
        b3.to_str().unwrap(),
    ]);
    assert_eq!(code, 0); // a negative decision still computes
    assert!(out.contains("congruent: false"));
}

#[test]
fn verify_collinear_sweeps_clean() {
    let args = [
        "isopar",
        "verify-collinear",
        "--max-rank",
        "3",
        "--reducible",
        "--mult-passes",
        "1",
        "--json",
    ];
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "stderr: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failures"], 0);
    assert_eq!(v["command"], "verify-collinear");

    let (code2, out2, _) = run_cli(&args);
    assert_eq!(code2, 0);
    assert_eq!(out, out2);

    let (code, out, _) =
        run_cli(&["isopar", "verify-collinear", "--max-rank", "3", "--mult-passes", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("failures: 0"));

    let (code, out, _) = run_cli(&["isopar", "verify-collinear", "--max-rank", "99"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
}

#[test]
fn genericity_counts_minimal_samples() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let (code, out, err) = run_cli(&[
        "isopar",
        "genericity",
        "--spec",
        spec.to_str().unwrap(),
        "--codim",
        "2",
        "--count",
        "20",
        "--seed",
        "42",
        "--json",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["minimal_count"], 20);
    assert_eq!(v["sampled"], 20);
}

#[test]
fn austere_search_reports_hits() {
    let dir = tempfile::tempdir().unwrap();
    let spec = a4_spec(&dir);
    let (code, out, err) = run_cli(&[
        "isopar",
        "austere-search",
        "--spec",
        spec.to_str().unwrap(),
        "--codim",
        "2",
        "--count",
        "400",
        "--seed",
        "3",
        "--coeff-bound",
        "2",
        "--require-minimal",
        "--json",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "austere-search");
    assert!(v["hits"].as_array().unwrap().len() >= 1);
    assert!(v["distinct_classes"].as_u64().unwrap() >= 1);
}

#[test]
fn fixtures_pass_from_the_cli() {
    let (code, out, err) = run_cli(&["isopar", "fixtures"]);
    assert_eq!(code, 0, "stderr: {err}\nstdout: {out}");
    assert!(out.contains("all passed"));

    let (code, out, _) = run_cli(&["isopar", "fixtures", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["checks"].as_array().unwrap().len() >= 6);
}

#[test]
fn help_goes_to_stdout_with_exit_zero() {
    let (code, out, _) = run_cli(&["isopar", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("analyze"));
    assert!(out.contains("verify-collinear"));
}
