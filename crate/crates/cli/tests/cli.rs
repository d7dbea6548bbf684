use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use unidef_core::scenario::ReportDocument;
use unidef_core::Verdict;

const AFFINE: &str = r#"{
  "name": "tiny_affine",
  "expected": "universal",
  "chart": "cartesian",
  "domain": { "shape": "box", "min": [0.0, 0.0, 0.0], "max": [1.0, 1.0, 1.0], "resolution": [4, 4, 4] },
  "deformation": { "family": "affine", "matrix": [[1.1, 0.2, 0.0], [0.0, 0.9, 0.1], [0.0, 0.0, 1.0]] },
  "seeds": { "count": 3 }
}"#;

const THIN: &str = r#"{
  "name": "thin_slab",
  "chart": "cartesian",
  "domain": { "shape": "box", "min": [0.0, 0.0, 0.0], "max": [1.0, 1.0, 1e-5], "resolution": [3, 3, 2] },
  "deformation": { "family": "affine", "matrix": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] },
  "seeds": { "count": 2 }
}"#;

fn unidef(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unidef"))
        .current_dir(dir)
        .env_remove("UNIDEF_OUTPUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bundled_suite() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios")
}

fn read_report(path: &Path) -> ReportDocument {
    ReportDocument::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("affine.json"), AFFINE).unwrap();
    fs::write(d.join("thin.json"), THIN).unwrap();
    fs::write(d.join("broken.json"), "{ \"name\": ").unwrap();

    let ok = unidef(d, &["check", "affine.json"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let report = read_report(&d.join("reports/tiny_affine.report.json"));
    assert_eq!(report.verdict, Verdict::Universal);

    let residual = bundled_suite().join("annulus_residual.json");
    let not = unidef(d, &["check", residual.to_str().unwrap()]);
    assert_eq!(not.status.code(), Some(1));
    let text = stdout(&not);
    assert!(text.contains("homogeneity.sigma_residual"), "{text}");
    assert!(text.contains("triviality.residual_stress"), "{text}");

    assert_eq!(unidef(d, &["check", "broken.json"]).status.code(), Some(2));
    assert_eq!(unidef(d, &["check", "missing.json"]).status.code(), Some(2));
    assert_eq!(
        unidef(d, &["check", "affine.json", "--grid-scale", "many"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        unidef(d, &["check", "affine.json", "--tolerance-scale", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(unidef(d, &["frobnicate"]).status.code(), Some(2));

    let thin = unidef(d, &["check", "thin.json"]);
    assert_eq!(thin.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&thin.stderr).contains("coverage"));
}

#[test]
fn output_locations() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("affine.json"), AFFINE).unwrap();

    let explicit = unidef(
        d,
        &["check", "affine.json", "--output", "out/explicit.json"],
    );
    assert_eq!(explicit.status.code(), Some(0));
    assert!(d.join("out/explicit.json").exists());

    let flag = unidef(d, &["--output-dir", "by_flag", "check", "affine.json"]);
    assert_eq!(flag.status.code(), Some(0));
    assert!(d.join("by_flag/tiny_affine.report.json").exists());

    let env = Command::new(env!("CARGO_BIN_EXE_unidef"))
        .current_dir(d)
        .env("UNIDEF_OUTPUT_DIR", d.join("by_env"))
        .args(["check", "affine.json", "--seeds", "2", "--grid-scale", "2"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
    let report = read_report(&d.join("by_env/tiny_affine.report.json"));
    assert_eq!(report.provenance.seeds.len(), 2);
    assert_eq!(report.timings.interior_points, 8 * 8 * 8);
}

#[test]
fn bundled_suite_matches_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let out = unidef(
        dir.path(),
        &[
            "suite",
            bundled_suite().to_str().unwrap(),
            "--output-dir",
            "reports",
        ],
    );
    let table = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{table}");
    assert_eq!(
        table.lines().filter(|l| l.ends_with(" ok")).count(),
        6,
        "{table}"
    );
    assert_eq!(fs::read_dir(dir.path().join("reports")).unwrap().count(), 6);
}

#[test]
fn suite_flags_mismatches_and_empty_directories() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::create_dir(d.join("empty")).unwrap();
    assert_eq!(unidef(d, &["suite", "empty"]).status.code(), Some(2));
    assert_eq!(unidef(d, &["suite", "nowhere"]).status.code(), Some(2));

    fs::create_dir(d.join("mixed")).unwrap();
    fs::write(d.join("mixed/a.json"), AFFINE).unwrap();
    fs::write(
        d.join("mixed/b.json"),
        AFFINE
            .replace("tiny_affine", "wrong_guess")
            .replace("\"universal\"", "\"not_universal\""),
    )
    .unwrap();
    let out = unidef(d, &["suite", "mixed"]);
    assert_eq!(out.status.code(), Some(1));
    let table = stdout(&out);
    let flagged: Vec<&str> = table.lines().filter(|l| l.contains("MISMATCH")).collect();
    assert_eq!(flagged.len(), 1, "{table}");
    assert!(flagged[0].starts_with("wrong_guess"));
}

#[test]
fn demo_writes_config_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let listed = stdout(&unidef(d, &["demos"]));
    assert_eq!(listed.lines().count(), 6);
    assert!(listed.lines().any(|l| l == "affine_no_residual"));

    let out = unidef(
        d,
        &["--output-dir", "demo_out", "demo", "affine_no_residual"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(d.join("demo_out/affine_no_residual.json").exists());
    let report = read_report(&d.join("demo_out/affine_no_residual.report.json"));
    assert_eq!(report.verdict, Verdict::Universal);

    let out = unidef(d, &["demo", "inflation_no_residual"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(d.join("reports/inflation_no_residual.json").exists());

    assert_eq!(unidef(d, &["demo", "unknown"]).status.code(), Some(2));
}
