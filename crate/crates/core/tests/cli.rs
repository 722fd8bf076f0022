use std::process::Command;

fn birat(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_birat"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn degrees_all_engines_agree() {
    let (out, err, code) = birat(&["degrees", "dp1-ercolani", "--nmax", "5", "--engine", "all"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("exact: 1, 2, 4, 8, 14, 22"));
    assert!(out.contains("picard: 1, 2, 4, 8, 14, 22"));
    assert!(out.contains("agreement: yes"));
}

#[test]
fn degrees_zero_horizon() {
    let (out, _, code) = birat(&["degrees", "inflated-qrt", "--nmax", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,d,nu3,nu6,nu9,nu10\n0,1,0,0,0,0\n");
}

#[test]
fn csv_is_byte_stable() {
    let args = ["degrees", "khk-euler", "--nmax", "3", "--format", "csv"];
    let (a, _, _) = birat(&args);
    let (b, _, _) = birat(&args);
    assert_eq!(a, b);
    assert_eq!(
        a,
        "n,d,nu1,nu2,nu3,nu4,nu5,nu6,nu7,nu8\n\
         0,1,0,0,0,0,0,0,0,0\n\
         1,3,0,0,0,0,2,2,2,2\n\
         2,9,2,2,2,2,6,6,6,6\n\
         3,19,6,6,6,6,12,12,12,12\n"
    );
}

#[test]
fn affine_engine_reaches_ten() {
    let (out, _, code) = birat(&[
        "degrees",
        "dp1-ercolani",
        "--engine",
        "affine",
        "--nmax",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last(), Some("10,92,72,90,110,92"));
}

#[test]
fn json_output_parses() {
    let (out, _, code) = birat(&[
        "degrees",
        "dp1-ercolani",
        "--nmax",
        "3",
        "--engine",
        "all",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["table"]["rows"][3]["degree"], 8);
}

#[test]
fn recurrence_for_qrt() {
    let (out, err, code) = birat(&[
        "recurrence",
        "inflated-qrt",
        "--engine",
        "affine",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["sequence"]["coefficients"],
        serde_json::json!(["3", "-2", "-2", "3", "-1"])
    );
    assert_eq!(
        v["universal"]["coefficients"],
        serde_json::json!(["3", "-2", "-2", "3", "-1"])
    );
}

#[test]
fn recurrence_for_dp1_reports_both_fits() {
    let (out, err, code) = birat(&[
        "recurrence",
        "dp1-ercolani",
        "--engine",
        "affine",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["universal"]["coefficients"],
        serde_json::json!(["2", "0", "-2", "1"])
    );
    assert_eq!(v["sequence"]["closed_form"]["expression"], "n^2 - n + 2");
    assert_eq!(v["sequence_holds"], true);
}

#[test]
fn too_few_terms_is_an_input_error() {
    let (_, err, code) = birat(&["recurrence", "dp1-ercolani", "--nmax", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("\"error\":\"sequence\""));
}

#[test]
fn darboux_pencil() {
    let (out, _, code) = birat(&["darboux", "dp1-ercolani", "--degree", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["basis"], serde_json::json!(["x*w + y*w + z*w - w^2", "z^2"]));
    assert_eq!(v["action"], serde_json::json!([["1", "0"], ["2", "1"]]));
}

#[test]
fn darboux_without_bounds() {
    let (out, _, code) = birat(&["darboux", "dp1-ercolani", "--degree", "3", "--no-bounds"]);
    assert_eq!(code, 0);
    assert!(out.contains("dimension: 20"));
}

#[test]
fn darboux_parameter_override() {
    let (out, _, code) = birat(&["darboux", "khk-euler", "--param", "gamma=1"]);
    assert_eq!(code, 0);
    assert!(out.contains("dimension: 3"));
    assert!(out.contains("X1*X3 + X2*X4"));
}

#[test]
fn picard_degrees() {
    let (out, _, code) = birat(&["picard", "dp1-ercolani", "--nmax", "10", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degrees"][10], 92);
    assert_eq!(v["transcription_ok"], true);
}

#[test]
fn validate_builtins() {
    for key in ["dp1-ercolani", "inflated-qrt", "khk-euler"] {
        let (out, err, code) = birat(&["validate", key, "--nmax", "3"]);
        assert_eq!(code, 0, "{key}: {out}{err}");
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn instance_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qrt.json");
    std::fs::write(&path, birat::instance::builtin_source("inflated-qrt").unwrap()).unwrap();
    let (out, _, code) = birat(&[
        "degrees",
        path.to_str().unwrap(),
        "--nmax",
        "3",
        "--format",
        "csv",
        "--param",
        "a=2",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,d,nu3,nu6,nu9,nu10\n"));
}

#[test]
fn bad_input_exit_codes() {
    let (_, err, code) = birat(&["degrees", "no-such-instance"]);
    assert_eq!(code, 2);
    assert!(err.starts_with('{'));
    let (_, _, code) = birat(&["degrees", "dp1-ercolani", "--param", "gamma"]);
    assert_eq!(code, 2);
    let (_, _, code) = birat(&["picard", "inflated-qrt"]);
    assert_eq!(code, 2);
    let (_, _, code) = birat(&["degrees", "dp1-ercolani", "--seed", "x^2 + y"]);
    assert_eq!(code, 2);
}

#[test]
fn term_ceiling_gives_partial_table() {
    let (out, err, code) = birat(&[
        "degrees",
        "dp1-ercolani",
        "--nmax",
        "6",
        "--max-terms",
        "50",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert!(err.contains("partial table"));
    assert!(out.lines().count() < 8);
}
