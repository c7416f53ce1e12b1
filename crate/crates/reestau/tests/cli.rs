//! End-to-end tests of the command-line binary: golden report shapes,
//! byte determinism, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn suite_path(name: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../suite")).join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reestau"))
        .args(args)
        .env("REES_TAU_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn tau_report_for_cusp() {
    let path = suite_path("cusp_q.alg");
    let out = run(&["tau", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ring: Q[x,z] (z-var z)"), "{text}");
    assert!(text.ends_with("tau = 1\n"), "{text}");
}

#[test]
fn tau_quiet_prints_only_the_value() {
    let path = suite_path("quad3_q.alg");
    let out = run(&["tau", path.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");
}

#[test]
fn tau_at_a_point() {
    // z^2 - x^3 is regular at (1, 1): order of the generator drops
    // below the weight there, which is an input error for tau
    let path = suite_path("cusp_q.alg");
    let out = run(&["tau", path.to_str().unwrap(), "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2));

    // the origin, spelled explicitly
    let out = run(&["tau", path.to_str().unwrap(), "--point", "0,0", "--quiet"]);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn eliminate_cusp_universal() {
    let path = suite_path("cusp_q.alg");
    let out = run(&["eliminate", path.to_str().unwrap(), "--route", "universal"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("route: universal"), "{text}");
    assert!(text.contains("4*x^3 W^2"), "{text}");
    assert!(text.contains("tau_G = 1"), "{text}");
    assert!(text.contains("tau_R = 0"), "{text}");
    assert!(text.contains("verdict: tau-drop holds"), "{text}");
}

#[test]
fn eliminate_zfree_route_agrees() {
    let path = suite_path("cusp_q.alg");
    let out = run(&[
        "eliminate",
        path.to_str().unwrap(),
        "--route",
        "z-free",
        "--weight-bound",
        "4",
        "--quiet",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn eliminate_with_local_presentation_check() {
    let path = suite_path("conic_q.alg");
    let out = run(&["eliminate", path.to_str().unwrap(), "--mode", "relative", "--kmax", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("local presentation: consistent-with-equivalence"), "{text}");
}

#[test]
fn saturate_roundtrips_through_the_file_format() {
    let path = suite_path("conic_q.alg");
    let out = run(&["saturate", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# saturation: absolute"), "{text}");
    // the printed algebra is itself a valid input file
    let dir = std::env::temp_dir().join("reestau-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let tmp = dir.join("saturated.alg");
    std::fs::write(&tmp, &text).unwrap();
    let again = run(&["tau", tmp.to_str().unwrap(), "--quiet"]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), "2\n");
}

#[test]
fn sing_enumerates_over_a_finite_field() {
    let path = suite_path("cusp_f5.alg");
    let out = run(&["sing", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1 point(s)"), "{text}");
    assert!(text.contains("(0,0)"), "{text}");
}

#[test]
fn sing_point_test() {
    let path = suite_path("cusp_q.alg");
    let out = run(&["sing", path.to_str().unwrap(), "--point", "0,0"]);
    assert!(stdout(&out).contains("in Sing: true"));
    let out = run(&["sing", path.to_str().unwrap(), "--point", "1,1"]);
    assert!(stdout(&out).contains("in Sing: false"));
}

#[test]
fn reports_are_byte_deterministic() {
    let path = suite_path("char2_y3.alg");
    let args: Vec<Vec<&str>> = vec![
        vec!["tau", path.to_str().unwrap()],
        vec!["eliminate", path.to_str().unwrap()],
        vec!["saturate", path.to_str().unwrap()],
    ];
    for a in args {
        let first = run(&a);
        let second = run(&a);
        assert!(first.status.success(), "{a:?}");
        assert_eq!(first.stdout, second.stdout, "{a:?}");
    }
}

#[test]
fn parse_errors_exit_2_with_line_numbers() {
    let dir = std::env::temp_dir().join("reestau-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "field Q\nvars x,z\ngen 2 z^2 +\n").unwrap();
    let out = run(&["tau", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["tau", "/nonexistent/nothing.alg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_builtin_suite_passes() {
    let out = run(&["verify"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("10 of 10 criteria passed"), "{text}");
    for i in 1..=10 {
        assert!(text.contains(&format!("PASS criterion {i:2}")), "{text}");
    }
}

#[test]
fn verify_suite_directory() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../suite");
    let out = run(&["verify", dir]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("10 of 10 criteria passed"), "{text}");
}
