//! Contract tests for the `forge` binary: exit codes, JSON shapes on stdout,
//! summaries on stderr, determinism, file output, cap handling, and the
//! recheck round trip including tamper detection.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn forge() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_forge"));
    // Isolate from any ambient cap override.
    c.env_remove("FORGE_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    forge().args(args).output().expect("spawn forge")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout must be JSON")
}

#[test]
fn count_verified_cell_agrees() {
    let out = run(&["count", "--q", "3", "--n", "2", "--which", "nonzero-trace", "--verify"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "nonzero_trace");
    assert_eq!(v["p"], 3);
    assert_eq!(v["r"], 1);
    assert_eq!(v["n"], 2);
    assert_eq!(v["formula"], 2);
    assert_eq!(v["enumeration"], 2);
    assert_eq!(v["agree"], true);
    assert_eq!(v["capped"], false);
    assert!(!out.stderr.is_empty(), "summary line expected on stderr");
}

#[test]
fn count_without_verify_omits_enumeration() {
    let out = run(&["count", "--q", "7", "--n", "2", "--which", "reducible-alpha"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["formula"], 25);
    assert!(v.get("enumeration").is_none(), "no enumeration without --verify");
    assert_eq!(v["agree"], true);
}

#[test]
fn bound_m_reports_a_ratio() {
    let out = run(&["count", "--q", "5", "--n", "1", "--which", "bound-M"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "bound_m");
    assert!(v["formula"]["numerator"].is_number());
    assert!(v["formula"]["denominator"].is_number());
}

#[test]
fn hypothesis_violations_exit_2() {
    // Base field too small for the search.
    assert_eq!(code(&run(&["search", "--q", "3", "--deg", "2"])), 2);
    // Odd target degree.
    assert_eq!(code(&run(&["search", "--q", "5", "--deg", "3"])), 2);
    // Characteristic divides the degree parameter.
    assert_eq!(
        code(&run(&["count", "--q", "9", "--n", "3", "--which", "nonzero-trace"])),
        2
    );
    // Composite modulus for the matrix layer.
    assert_eq!(code(&run(&["witness", "--ell", "4", "--n", "1"])), 2);
    // Classification dimension out of range.
    assert_eq!(
        code(&run(&["classify", "--gens", "/dev/null", "--ell", "3", "--n", "3"])),
        2
    );
    // Degree parameter zero.
    assert_eq!(
        code(&run(&["count", "--q", "5", "--n", "0", "--which", "irreducible"])),
        2
    );
}

#[test]
fn cap_flag_exits_3_when_enumeration_exceeds_it() {
    let args = ["count", "--q", "5", "--n", "4", "--which", "irreducible", "--verify"];
    assert_eq!(code(&run(&args)), 0, "default cap covers 5^4 polynomials");
    let mut capped = args.to_vec();
    capped.extend(["--cap", "10"]);
    assert_eq!(code(&run(&capped)), 3);
}

#[test]
fn cap_env_var_is_honored_and_validated() {
    let args = ["count", "--q", "5", "--n", "4", "--which", "irreducible", "--verify"];
    let out = forge().args(args).env("FORGE_CAP", "10").output().unwrap();
    assert_eq!(code(&out), 3, "FORGE_CAP=10 must cap the sweep");

    let out = forge().args(args).env("FORGE_CAP", "banana").output().unwrap();
    assert_eq!(code(&out), 4, "malformed FORGE_CAP is a parse error");

    // The flag takes precedence over the environment.
    let mut flagged = args.to_vec();
    flagged.extend(["--cap", "1000"]);
    let out = forge().args(&flagged).env("FORGE_CAP", "10").output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn search_is_deterministic_and_matches_known_cell() {
    let args = ["search", "--q", "5", "--deg", "2", "--deterministic"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "deterministic runs must be byte-identical");
    let v = stdout_json(&a);
    assert_eq!(v["kind"], "search");
    assert_eq!(v["schema_version"], 1);
    // First qualifying polynomial over F_5: x^2 + 4x + 1.
    assert_eq!(v["polynomial"], serde_json::json!([[1], [4]]));
    assert_eq!(v["polynomial_trace"], serde_json::json!([4]));
    assert!(v.get("timestamp").is_none(), "deterministic mode omits timestamps");
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn witness_writes_file_and_rechecks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w51.json");
    let out = run(&[
        "witness", "--ell", "5", "--n", "1", "--deterministic",
        "--out", cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty(), "--out redirects the JSON away from stdout");

    let v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["kind"], "witness");
    assert_eq!(v["closure"]["total"], 120);
    assert_eq!(v["closure"]["multiplier_one"], 120);
    assert_eq!(v["closure"]["verified"], true);

    let re = run(&["recheck", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code(&re), 0, "stderr: {}", String::from_utf8_lossy(&re.stderr));
    let rv = stdout_json(&re);
    assert_eq!(rv["kind"], "recheck");
    assert_eq!(rv["all_pass"], true);
    assert_eq!(rv["any_capped"], false);
}

#[test]
fn tampered_certificate_fails_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w51.json");
    let out = run(&[
        "witness", "--ell", "5", "--n", "1", "--deterministic",
        "--out", cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let entry = &mut v["witness_matrix"]["entries"][0];
    *entry = Value::from((entry.as_u64().unwrap() + 1) % 5);
    fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();

    let re = run(&["recheck", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code(&re), 1, "a tampered matrix must fail verification");
    let rv = stdout_json(&re);
    assert_eq!(rv["all_pass"], false);
    assert!(String::from_utf8_lossy(&re.stderr).contains("FAIL"));
}

#[test]
fn recheck_rejects_unparseable_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    fs::write(&path, "this is not json").unwrap();
    assert_eq!(code(&run(&["recheck", "--cert", path.to_str().unwrap()])), 4);

    // Valid JSON that matches none of the known document shapes.
    fs::write(&path, "{\"surprise\": 1}").unwrap();
    assert_eq!(code(&run(&["recheck", "--cert", path.to_str().unwrap()])), 4);
}

#[test]
fn classify_reducible_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("red.txt");
    fs::write(
        &gens,
        "# three transvections fixing the span of e1, e3\n\
         1 0 2 0 0 1 0 0 0 0 1 0 0 0 0 1\n\
         1 0 0 0 0 1 0 0 1 0 1 0 0 0 0 1\n\
         2 0 2 0 0 1 0 0 1 0 0 0 0 0 0 1\n",
    )
    .unwrap();
    let out = run(&["classify", "--gens", gens.to_str().unwrap(), "--ell", "3", "--n", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "classify");
    assert_eq!(v["classification"]["tag"], "reducible");
    assert!(v["classification"]["subspace"].is_array());
}

#[test]
fn classify_full_group_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("sl2.txt");
    fs::write(&gens, "1 2 0 1\n1 0 1 1\n").unwrap();
    let out = run(&["classify", "--gens", gens.to_str().unwrap(), "--ell", "3", "--n", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["classification"]["tag"], "contains-sp");
    assert_eq!(v["classification"]["order"], 24);
}

#[test]
fn classify_rejects_malformed_generator_files() {
    let dir = tempfile::tempdir().unwrap();

    let bad_token = dir.path().join("tok.txt");
    fs::write(&bad_token, "1 x 0 1\n").unwrap();
    assert_eq!(
        code(&run(&["classify", "--gens", bad_token.to_str().unwrap(), "--ell", "3", "--n", "1"])),
        4
    );

    let bad_width = dir.path().join("width.txt");
    fs::write(&bad_width, "1 0 0 1 1\n").unwrap();
    assert_eq!(
        code(&run(&["classify", "--gens", bad_width.to_str().unwrap(), "--ell", "3", "--n", "1"])),
        4
    );

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# only a comment\n").unwrap();
    assert_eq!(
        code(&run(&["classify", "--gens", empty.to_str().unwrap(), "--ell", "3", "--n", "1"])),
        4
    );
}

#[test]
fn verify_all_sweep_rechecks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("va.json");
    let out = run(&[
        "verify-all", "--qmax", "5", "--nmax", "2", "--deterministic",
        "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["any_capped"], false);
    assert_eq!(v["closure_checks"].as_array().unwrap().len(), 3);

    let re = run(&["recheck", "--cert", report.to_str().unwrap()]);
    assert_eq!(code(&re), 0, "stderr: {}", String::from_utf8_lossy(&re.stderr));
}

#[test]
fn verify_all_under_tight_cap_reports_capped() {
    let out = run(&["verify-all", "--qmax", "3", "--nmax", "1", "--cap", "100"]);
    assert_eq!(code(&out), 3, "closure cells exceed a cap of 100");
    let v = stdout_json(&out);
    assert_eq!(v["any_capped"], true);
    assert_eq!(v["all_pass"], true, "capped cells are not failures");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["count", "--q", "5"])), 2, "missing required argument");
    assert_eq!(code(&run(&["no-such-subcommand"])), 2);
}
