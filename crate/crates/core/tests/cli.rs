use std::path::Path;
use std::process::Command;

use chow_orbits::cli::presets::preset;
use chow_orbits::cli::run_args;
use serde_json::Value;

fn chow(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chow"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const T1: &str = r#"{
  "model": {"g": 1, "d": 0, "rho": 1},
  "cycle": {"ns": [[[1, 1, 0, 1]]], "pic0": [[[0, 1, 0, 1]]]},
  "generators": [{"type": "translation", "point": [[[1, 1, 0, 1]]]}],
  "options": {"seed": 5, "word": "t1^3"}
}"#;

#[test]
fn verify_fm_passes() {
    let (code, out, _) = chow(&["verify-fm", "--g", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("16/16"));
    let (code, out, _) = chow(&["--json", "verify-fm", "--g", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["passed"], 4);
}

#[test]
fn orbit_span_reports_dimension_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "t1.json", T1);
    let (code, out, err) = chow(&["--json", "orbit-span", &path]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["dimension"], 2);
    assert_eq!(v["result"]["invariant"], true);
    assert_eq!(v["input"]["scenario"]["options"]["seed"], 5);
    assert!(v.get("timing_ms").is_none());
    let (_, out, _) = chow(&["--json", "--timing", "orbit-span", &path]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["timing_ms"].is_number());
}

#[test]
fn split_separates_parts() {
    let dir = tempfile::tempdir().unwrap();
    let text = T1.replace(r#""pic0": [[[0, 1, 0, 1]]]"#, r#""pic0": [[[3, 2, 0, 1]]]"#);
    let path = write(dir.path(), "s.json", &text);
    let (code, out, _) = chow(&["--json", "split", &path]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let r = &v["result"];
    assert_eq!(r["symmetric"]["ns"], serde_json::json!([[[1, 1, 0, 1]]]));
    assert_eq!(r["symmetric"]["pic0"], serde_json::json!([[[0, 1, 0, 1]]]));
    assert_eq!(r["antisymmetric"]["ns"], serde_json::json!([[[0, 1, 0, 1]]]));
    assert_eq!(r["antisymmetric"]["pic0"], serde_json::json!([[[3, 2, 0, 1]]]));
}

#[test]
fn normalize_uses_option_word_or_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "t1.json", T1);
    let (code, out, _) = chow(&["--json", "normalize", &path]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["shift"], serde_json::json!([[[3, 1, 0, 1]]]));
    assert_eq!(
        v["result"]["pullback"]["pic0"],
        serde_json::json!([[[3, 1, 0, 1]]])
    );
    let (code, out, _) = chow(&["--json", "normalize", &path, "--word", "t1^-2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["shift"], serde_json::json!([[[-2, 1, 0, 1]]]));
}

#[test]
fn fourier_command() {
    let (code, out, _) = chow(&["fourier", "--g", "1", "--class", "e1^e2"]);
    assert_eq!(code, 0);
    assert!(out.contains("F e1^e2 =\n  1\n"), "{out}");
    let (code, out, _) = chow(&["--json", "fourier", "--g", "1", "--class", "-f1^f2", "--dual"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["image"], "-1");
    let (code, _, err) = chow(&["fourier", "--g", "1", "--class", "e1 + e7"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1, column 6"), "{err}");
}

#[test]
fn input_errors_exit_two_with_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (T1.replace(r#""d": 0"#, r#""d": 8"#), "not-square-free"),
        (T1.replace("t1^3", "t2"), "bad-generator-index"),
        (
            T1.replace(r#""point": [[[1, 1, 0, 1]]]"#, r#""point": [[[1, 1, 2, 1]]]"#),
            "d-mismatch",
        ),
        (T1.replace(r#""rho": 1"#, r#""rho": 2"#), "shape"),
        (
            T1.replace(r#""type": "translation""#, r#""type": "rotation""#),
            "schema",
        ),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("bad{i}.json"), text);
        let (status, _, err) = chow(&["--json", "orbit-span", &path]);
        assert_eq!(status, 2, "{code}");
        let v: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["error"]["code"], *code, "{err}");
    }
    let (status, _, err) = chow(&["split", "/nonexistent/file.json"]);
    assert_eq!(status, 2);
    assert!(err.contains("[io]"));
    let (status, _, _) = chow(&["orbit-span"]);
    assert_eq!(status, 2);
    let (status, _, _) = chow(&["no-such-command"]);
    assert_eq!(status, 2);
    let (status, _, err) = chow(&["orbit-span", "--preset", "nope"]);
    assert_eq!(status, 2);
    assert!(err.contains("unknown-preset"));
}

#[test]
fn not_converged_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = T1
        .replace(r#""seed": 5"#, r#""degree": 2, "seed": 5, "max_rounds": 1"#)
        .replace(r#"[[[0, 1, 0, 1]]]}"#, r#"[[[0, 1, 0, 1]]], "power": 2}"#);
    let path = write(dir.path(), "r.json", &text);
    let (code, out, _) = chow(&["--json", "orbit-span", &path]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["converged"], false);
}

#[test]
fn presets_listing_and_show() {
    let (code, out, _) = chow(&["presets"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "number-field"));
    let (code, out, _) = chow(&["presets", "--show", "semidirect"]);
    assert_eq!(code, 0);
    let shown = chow_orbits::cli::scenario::parse_scenario(out.as_bytes()).unwrap();
    assert_eq!(shown, preset("semidirect").unwrap());
}

#[test]
fn demo_step3_on_preset() {
    let out = run_args(["chow", "--json", "demo-step3", "--preset", "cor-translation"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["dimension"], 2);
    assert_eq!(v["result"]["powers"][1]["bound"], 3);
    let out = run_args([
        "chow",
        "demo-step3",
        "--preset",
        "fg-translations",
        "--max-power",
        "2",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("l^2") && !out.stdout.contains("l^3"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["chow", "--json", "orbit-span", "--preset", "semidirect"],
        vec!["chow", "--json", "demo-step3", "--preset", "cor-number-field"],
        vec!["chow", "orbit-span", "--preset", "fg-translations"],
    ] {
        let a = run_args(&args);
        let b = run_args(&args);
        assert_eq!(a, b);
    }
}
