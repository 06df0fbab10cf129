//! End-to-end tests of the `ovpframe` binary: determinism of generated
//! output, exit-code semantics, schema diagnostics, and the tolerance
//! override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ovpframe"));
    // isolate from any ambient tolerance override
    cmd.env_remove("OVPFRAME_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ovpframe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

fn write_scratch(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, text).expect("scratch write");
    path
}

#[test]
fn generation_is_deterministic_and_its_output_classifies() {
    let args = ["gen", "--kind", "generic", "--seed", "9", "--p", "1.5", "--dims", "3,2", "--N", "4", "--rx", "inf"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "same flags, same bytes");
    let text = stdout(&first);
    assert!(text.starts_with("{\"A\":"));

    let file = write_scratch("generic.json", &text);
    let check = run(&["check", file.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    let report = stdout(&check);
    assert!(report.contains("\"frame\":true"), "generated instance is a frame: {report}");
    assert!(report.contains("\"strongest\":\"frame\""));
}

#[test]
fn couple_kinds_emit_two_frames() {
    let out = run(&["gen", "--kind", "approx_dual_pair", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"first\":{\"A\":"));
    assert!(text.contains("\"second\":{\"A\":"));
}

#[test]
fn unknown_kinds_and_invalid_exponents_are_refused() {
    let out = run(&["gen", "--kind", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("valid kinds"));

    let out = run(&["gen", "--kind", "generic", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn verification_reports_are_byte_identical_across_runs() {
    let path_a = scratch("report-a.json");
    let path_b = scratch("report-b.json");
    let first = run(&[
        "verify-all", "--instances", "2", "--seed", "11", "--json", path_a.to_str().unwrap(),
    ]);
    let second = run(&[
        "verify-all", "--instances", "2", "--seed", "11", "--json", path_b.to_str().unwrap(),
    ]);
    assert_eq!(first.status.code(), Some(0), "suite passes: {}", stderr(&first));
    assert_eq!(second.status.code(), Some(0));
    let bytes_a = std::fs::read(&path_a).unwrap();
    let bytes_b = std::fs::read(&path_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "fixed seed fixes the report bytes");
    assert!(stdout(&first).contains("0 failures"));
}

#[test]
fn the_only_filter_narrows_the_suite_and_rejects_unknown_ids() {
    let out = run(&["verify-all", "--only", "dilation", "--instances", "2", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("dilation"));
    assert!(text.contains("1 checks"), "one record expected: {text}");

    let out = run(&["verify-all", "--only", "bogus", "--instances", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("dilation"), "error lists the valid ids");
}

#[test]
fn malformed_frame_files_name_the_offending_field() {
    let bad_p = write_scratch(
        "bad-p.json",
        "{\"A\":[[1.0,0.0]],\"Psi\":[[1.0,0.0]],\"X\":{\"dim\":2,\"r\":2.0},\"Y\":{\"dim\":1,\"r\":2.0},\"p\":0}",
    );
    let out = run(&["check", bad_p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("field \"p\""), "stderr: {}", stderr(&out));

    let bad_shape = write_scratch(
        "bad-shape.json",
        "{\"A\":[[1.0,0.0],[1.0]],\"Psi\":[[1.0,0.0],[0.0,1.0]],\"X\":{\"dim\":2,\"r\":2.0},\"Y\":{\"dim\":1,\"r\":2.0},\"p\":2.0}",
    );
    let out = run(&["check", bad_shape.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("A[1]"), "stderr: {}", stderr(&out));

    let truncated = write_scratch("truncated.json", "{\"A\":[[1.0,");
    let out = run(&["check", truncated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn dual_certifies_and_refuses_by_exit_code() {
    let gen = run(&["gen", "--kind", "generic", "--seed", "21", "--dims", "3,2", "--N", "4"]);
    let frame = write_scratch("dual-base.json", &stdout(&gen));
    let out = run(&["dual", frame.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("\"identities_hold\":true"));

    let gen = run(&["gen", "--kind", "bessel_only", "--seed", "21", "--dims", "3,2", "--N", "4"]);
    let degenerate = write_scratch("dual-degenerate.json", &stdout(&gen));
    let out = run(&["dual", degenerate.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"), "singular operators refuse dualizing");
}

#[test]
fn dilate_emits_the_extension_and_its_embedding() {
    let gen = run(&["gen", "--kind", "generic", "--seed", "5", "--dims", "2,1", "--N", "4"]);
    let frame = write_scratch("dilate-base.json", &stdout(&gen));
    let out = run(&["dilate", frame.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"added_dim\":"));
    assert!(text.contains("\"embed\":"));
    assert!(text.contains("\"dilated\":{\"A\":"));
}

#[test]
fn perturb_passes_on_identical_pairs_and_fails_on_unrelated_ones() {
    let gen = run(&["gen", "--kind", "generic", "--seed", "31", "--dims", "3,2", "--N", "4"]);
    let base = write_scratch("perturb-base.json", &stdout(&gen));
    let out = run(&["perturb", base.to_str().unwrap(), base.to_str().unwrap(), "--variant", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"hypothesis_ok\":true"));
    assert!(text.contains("\"conclusion_frame\":true"));

    let gen = run(&["gen", "--kind", "generic", "--seed", "32", "--dims", "3,2", "--N", "4"]);
    let other = write_scratch("perturb-other.json", &stdout(&gen));
    let out = run(&["perturb", base.to_str().unwrap(), other.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "unrelated families exceed the sum condition");
    assert!(stdout(&out).contains("\"hypothesis_ok\":false"));
}

#[test]
fn the_tolerance_override_is_validated_and_accepted() {
    let gen = run(&["gen", "--kind", "generic", "--seed", "8"]);
    let frame = write_scratch("tol-base.json", &stdout(&gen));

    let out = bin()
        .env("OVPFRAME_TOL", "abc")
        .args(["check", frame.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("OVPFRAME_TOL"));

    let out = bin()
        .env("OVPFRAME_TOL", "-1e-6")
        .args(["check", frame.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("OVPFRAME_TOL"));

    let out = bin()
        .env("OVPFRAME_TOL", "1e-9")
        .args(["check", frame.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}
