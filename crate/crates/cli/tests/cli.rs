use std::process::Command;

use bow_cli::run;
use bow_core::kclass::KTerm;
use bow_core::maya::enumerate_fixed_points;
use bow_core::tangent::tangent_via_pairs;
use bow_core::{BraneTriple, IntQTSeries, IntSeries, KClass, MayaDiagram};

fn bow(args: &[&str]) -> bow_cli::Outcome {
    run(std::iter::once("bow").chain(args.iter().copied()))
}

#[test]
fn euler_series_example() {
    let out = bow(&["euler-series", "--e", "3,2,1", "--f", "3,2,1", "--order", "6"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let s: IntSeries = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(s.coeffs(), &[1, 16, 125, 723, 3428, 14167, 52679]);
    assert_eq!(s.order(), 6);
}

#[test]
fn fixed_point_count() {
    let out = bow(&["fixed-points", "--d", "6", "--e", "2,3,1", "--f", "2,4", "--count"]);
    assert_eq!(out.stdout, "1806\n");
}

#[test]
fn fixed_points_round_trip() {
    let out = bow(&["fixed-points", "--d", "5", "--e", "0,3", "--f", "-1,4"]);
    let fps: Vec<MayaDiagram> = serde_json::from_str(&out.stdout).unwrap();
    let direct: Vec<_> = enumerate_fixed_points(5, &[0, 3], &[-1, 4]).unwrap().collect();
    assert_eq!(fps, direct);
}

#[test]
fn tangent_json_round_trip() {
    let out = bow(&["tangent", "--d", "5", "--e", "0,3", "--f", "-1,4", "--check"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let raw: Vec<Vec<KTerm>> = serde_json::from_str(&out.stdout).unwrap();
    let direct: Vec<KClass> = enumerate_fixed_points(5, &[0, 3], &[-1, 4])
        .unwrap()
        .map(|md| tangent_via_pairs(&md))
        .collect();
    let parsed: Vec<KClass> = raw.iter().map(|t| KClass::from_kterms(2, t).unwrap()).collect();
    assert_eq!(parsed, direct);
}

#[test]
fn classify_golden() {
    let out = bow(&["--format", "text", "classify", "--e", "0,0,-1", "--f", "-1,0,0", "--m", "3"]);
    assert_eq!(out.stdout, "quiver: no\nquiver-like: yes\ngaps: [0, -1, 4]\n");
    let out = bow(&["--format", "text", "classify", "--e", "0,1,2", "--m", "2"]);
    assert!(out.stdout.starts_with("quiver: yes\n"));
}

#[test]
fn hw_moves() {
    let out = bow(&["hw", "--d", "5", "--e", "0,3", "--f", "-1,4", "--move", "move1"]);
    let t: BraneTriple = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(t, BraneTriple::new(5, vec![0, 3], vec![-1, 4]).unwrap().move1());
    let out = bow(&["hw", "--d", "5", "--e", "0,3", "--f", "-1,4", "--move", "d5", "--j", "2"]);
    assert_eq!(out.code, 1);
}

#[test]
fn poincare_series_json() {
    let out = bow(&["poincare-series", "--e", "0,0", "--f", "0,0", "--order", "2"]);
    let s: IntQTSeries = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(s.coeff(1).get(&2), Some(&2));
}

#[test]
fn partition_function_exact() {
    let out = bow(&[
        "partition-function", "--e", "0", "--f", "0", "--eps1", "2", "--eps2", "-1/3", "--a", "5", "--order", "2",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    // 1 / (d! (e1 e2)^d)
    assert_eq!(v["z"], serde_json::json!(["1/1", "-3/2", "9/8"]));
}

#[test]
fn seeded_runs_are_identical() {
    let args = ["partition-function", "--e", "0,1", "--f", "1", "--order", "2", "--seed", "7"];
    let a = bow(&args);
    let b = bow(&args);
    assert_eq!(a, b);
    let c = bow(&["partition-function", "--e", "0,1", "--f", "1", "--order", "2", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn validation_errors_exit_one() {
    assert_eq!(bow(&["euler-series", "--e", "3,2", "--f", "1"]).code, 1);
    assert_eq!(bow(&["euler-series", "--e", "x", "--f", "1"]).code, 1);
    assert_eq!(bow(&["fixed-points", "--bogus"]).code, 1);
    let bad = bow(&["partition-function", "--e", "0", "--f", "0", "--eps1", "1/0", "--eps2", "1", "--a", "0"]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("malformed rational"));
    let nongeneric = bow(&["partition-function", "--e", "0", "--f", "0", "--eps1", "1", "--eps2", "1", "--a", "0"]);
    assert_eq!(nongeneric.code, 1);
}

#[test]
fn modular_and_covering() {
    let out = bow(&["modular-check", "--case", "321", "--order", "10", "--box", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = bow(&["modular-check", "--case", "neg111", "--order", "10", "--box", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = bow(&["covering", "--d", "3", "--e", "0,0", "--f", "0,0"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["witness_found"], true);
}

#[test]
fn help_exits_zero() {
    let out = bow(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("modular-check"));
}

#[test]
fn binary_with_thread_variable() {
    let out = Command::new(env!("CARGO_BIN_EXE_bow"))
        .args(["--format", "text", "euler-series", "--e", "-1,1", "--f", "0,0", "--order", "3"])
        .env(bow_cli::THREADS_VAR, "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("d  coeff\n"));
    let bad = Command::new(env!("CARGO_BIN_EXE_bow"))
        .args(["euler-series", "--e", "0", "--f", "0"])
        .env(bow_cli::THREADS_VAR, "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
