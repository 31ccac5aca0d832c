//! Determinism acceptance for the batch runner: the shipped scenarios give
//! byte-identical reports regardless of the worker count, and the exit
//! status reflects the verdicts.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

fn binary() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_adic"));
    assert!(p.exists(), "runner binary missing at {}", p.display());
    p = p.canonicalize().unwrap();
    p
}

fn run_demo(name: &str, jobs: usize, extra: &[&str]) -> (String, i32) {
    let out = Command::new(binary())
        .args(["demo", name, "--jobs", &jobs.to_string()])
        .args(extra)
        .output()
        .expect("runner executes");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn criterion_8_reports_are_byte_identical_across_job_counts() {
    let start = Instant::now();
    for demo in ["wpr", "mgm", "serre", "cofinite"] {
        let (solo, code1) = run_demo(demo, 1, &[]);
        let (wide, code8) = run_demo(demo, 8, &[]);
        assert_eq!(code1, 0, "demo {} should pass with one worker", demo);
        assert_eq!(code8, 0, "demo {} should pass with eight workers", demo);
        assert_eq!(solo, wide, "demo {} reports differ across job counts", demo);
        assert!(!solo.is_empty());
    }
    println!(
        "ACCEPTANCE 8: PASS ({:.2?}) byte-identical reports for all shipped scenarios at --jobs 1 and --jobs 8",
        start.elapsed()
    );
}

#[test]
fn failing_comparison_exits_one_with_a_witness() {
    let dir = std::env::temp_dir().join("adic-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let scn = dir.join("falsify.scn");
    std::fs::write(
        &scn,
        "ring Z = integers\ncontext c = Z (2)\nmodule M over Z = cyclic (5)\ncheck zero-map c M bound=4\n",
    )
    .unwrap();
    let out = Command::new(binary())
        .args(["run", scn.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"failed\""), "{}", text);
    assert!(text.contains("cokernel ["), "witness presentation missing: {}", text);
}

#[test]
fn undeclared_reference_reports_location_and_exits_three() {
    let dir = std::env::temp_dir().join("adic-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let scn = dir.join("undeclared.scn");
    std::fs::write(&scn, "ring Z = integers\ncontext c = Z (2)\ncheck psi c GHOST level=2\n").unwrap();
    let out = Command::new(binary())
        .args(["run", scn.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("GHOST"), "{}", err);
}

#[test]
fn missing_file_is_an_io_error() {
    let out = Command::new(binary())
        .args(["run", "/nonexistent/nothing.scn"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let dir = std::env::temp_dir().join("adic-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/serre.scn");
    let out = Command::new(binary()).args(["fmt", src.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let once = dir.join("canonical.scn");
    std::fs::write(&once, &out.stdout).unwrap();
    let out2 = Command::new(binary()).args(["fmt", once.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.stdout, out2.stdout, "canonical print is not a fixed point");
}

#[test]
fn timings_flag_adds_wall_times() {
    let (plain, _) = run_demo("wpr", 1, &[]);
    let (timed, _) = run_demo("wpr", 1, &["--timings"]);
    assert!(!plain.contains("wall_ms"));
    assert!(timed.contains("wall_ms"));
}
