use std::process::Command;

fn spantree(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_spantree")).args(args).output().expect("spawn spantree")
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn count_circulant_scaled_plain() {
    let out = spantree(&["count", "circulant-scaled", "--beta", "3", "--gammas", "1", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "384");
}

#[test]
fn count_torus_plain() {
    let out = spantree(&["count", "torus", "--alphas", "2", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "32");
}

#[test]
fn count_cycle_degenerate() {
    let out = spantree(&["count", "circulant-scaled", "--beta", "1", "--n", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "7");
}

#[test]
fn count_json_roundtrip() {
    let out = spantree(&[
        "count",
        "circulant-scaled",
        "--beta",
        "4",
        "--gammas",
        "1,2",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let tau = v["tau"].as_str().expect("tau is a decimal string");
    assert!(tau.chars().all(|c| c.is_ascii_digit()));
    // round-trip: re-serialized value parses to the same tree
    let again: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn log_mode_reports_enclosure() {
    let out = spantree(&[
        "count",
        "circulant-scaled",
        "--beta",
        "12",
        "--gammas",
        "2,3",
        "--n",
        "1000000000",
        "--mode",
        "log",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mid: f64 = v["log_tau"]["mid"].as_str().unwrap().parse().unwrap();
    let rad: f64 = v["log_tau"]["rad"].as_str().unwrap().parse().unwrap();
    assert!(mid > 1e10 && rad / mid < 1e-9);
}

#[test]
fn verify_clean_and_corrupt_exit_codes() {
    let out = spantree(&["verify", "--max-beta", "4", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = spantree(&["verify", "--max-beta", "4", "--max-n", "3", "--corrupt"]);
    assert_eq!(out.status.code(), Some(2), "corrupted sweep must fail");
}

#[test]
fn usage_error_exit_code() {
    let out = spantree(&["count", "circulant-scaled", "--beta", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = spantree(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn entropy_scaled_json() {
    let out = spantree(&[
        "entropy", "scaled", "--beta", "6", "--gammas", "2,3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sum: f64 = v["argcosh_sum"]["mid"].as_str().unwrap().parse().unwrap();
    let int: f64 = v["bessel_integral"]["mid"].as_str().unwrap().parse().unwrap();
    assert!((sum - int).abs() < 1e-8);
}

#[test]
fn deterministic_output() {
    let args =
        ["entropy", "compare", "--gamma-d", "2", "--beta-range", "2..8", "--format", "json"];
    let a = stdout(&spantree(&args));
    let b = stdout(&spantree(&args));
    assert_eq!(a, b);
}

#[test]
fn loop_generator_is_usage_error() {
    let out = spantree(&["count", "circulant-fixed", "--n", "6", "--gens", "6"]);
    assert_eq!(out.status.code(), Some(1));
}
