use std::process::Command;

use cremona_core::bubble::tree::TreeJson;
use cremona_core::{BasePointTree, PlaneMap};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cremona")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = run(&all);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{}: {}\n{}", e, out, err));
    (code, v)
}

const PSI_TEXT: &str = "(x^5 + x^2*y*z^2 - z^5 : x^4*y - x^2*z^3 : x^3*y*z - x*z^4)";

#[test]
fn eval_at_the_base_point_is_indeterminate() {
    let (code, out, _) = run(&["map", "eval", "--map", "psi", "--point", "0:1:0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "indeterminate (base point)");
    let (_, out, _) = run(&["map", "eval", "--map", "psi", "--point", "1:2:3"]);
    assert!(out.starts_with('('), "{}", out);
}

#[test]
fn inverse_and_compose() {
    let (code, out, _) = run(&["map", "inverse", "--map", "sigma"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(y*z : x*z : x*y)");
    let (_, out, _) = run(&["map", "compose", "--map", "identity", "--map", "psi"]);
    assert_eq!(out.trim(), PSI_TEXT);
    let (_, out, _) = run(&["map", "compose", "--map", "sigma", "--map", "sigma"]);
    assert_eq!(out.trim(), "(x : y : z)");
}

#[test]
fn map_json_round_trips() {
    let (code, v) = json(&["map", "show", "--map", "chi"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 6);
    let j: cremona_core::plane_map::MapJson = serde_json::from_value(v.clone()).unwrap();
    let f = PlaneMap::from_json(&j).unwrap();
    assert_eq!(f.to_string(), v["map"].as_str().unwrap());
}

#[test]
fn contracted_curves_and_jacobian() {
    let (_, v) = json(&["map", "contracted", "--map", "psi"]);
    let curves: Vec<&str> = v["curves"].as_array().unwrap().iter().map(|c| c["curve"].as_str().unwrap()).collect();
    assert_eq!(curves, vec!["x", "x^2*y - z^3"]);
    let (_, out, _) = run(&["map", "jacobian", "--map", "sigma"]);
    assert_eq!(out.lines().next().unwrap(), "2*x*y*z");
}

#[test]
fn basepoints_in_every_format() {
    let (code, out, _) = run(&["basepoints", "--map", "psi", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.contains("satellite edges: p3 -> p1"), "{}", out);
    let rows = out.lines().filter(|l| l.starts_with('p')).count();
    assert_eq!(rows, 9);

    let (_, v) = json(&["basepoints", "--map", "psi"]);
    assert_eq!(v["b"], 9);
    let tree: TreeJson = serde_json::from_value(v["tree"].clone()).unwrap();
    let back = BasePointTree::from_json(&tree).unwrap();
    assert_eq!(back.multiplicities(), vec![4, 1, 1, 1, 1, 1, 1, 1, 1]);

    let (_, dot, _) = run(&["basepoints", "--map", "psi", "--format", "dot"]);
    assert!(dot.starts_with("digraph") && dot.contains("p3 -> p1 [style=dashed]"));
    let (_, csv, _) = run(&["basepoints", "--map", "psi", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn small_base_loci() {
    let (_, v) = json(&["basepoints", "--map", "identity"]);
    assert_eq!(v["b"], 0);
    assert!(v["tree"]["nodes"].as_array().unwrap().is_empty());
    let (_, v) = json(&["basepoints", "--map", "(y*z:x*z:x*y)"]);
    assert_eq!(v["b"], 3);
    assert!(v["tree"]["nodes"].as_array().unwrap().iter().all(|n| n["tower"].as_array().unwrap().is_empty()));
}

#[test]
fn mu_verdicts() {
    let (code, v) = json(&["mu", "--map", "psi", "--horizon", "6"]);
    assert_eq!(code, 0);
    assert!(v["mu"]["lower_bound"].as_u64().unwrap() >= 1);
    assert_eq!(v["verdict"]["level"], "not-regularizable-evidence");

    let (code, v) = json(&["mu", "--map", "sigma"]);
    assert_eq!(code, 0);
    assert_eq!(v["mu"]["exact"], 0);
    assert_eq!(v["verdict"]["level"], "regularizable-evidence");

    let (code, v) = json(&["mu", "--map", "chi_np", "--n", "2", "--p", "3", "--horizon", "4"]);
    assert_eq!(code, 0);
    assert!(v["mu"]["lower_bound"].as_u64().unwrap() >= 1);
}

#[test]
fn inconclusive_exit_code() {
    let (code, out, _) = run(&["mu", "--map", "psi", "--horizon", "1"]);
    assert_eq!(code, 2);
    assert!(out.contains("inconclusive"));
}

#[test]
fn degrees_report() {
    let (code, out, _) = run(&["degrees", "--map", "sigma", "--format", "csv", "--horizon", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,degree,b,method");
    assert_eq!(lines[1], "1,2,3,direct");
    assert_eq!(lines[2], "2,1,0,direct");
    let (_, v) = json(&["degrees", "--map", "psi", "--horizon", "3"]);
    assert_eq!(v["degree_sequence"], serde_json::json!([5, 25, 125]));
    assert_eq!(v["b_sequence"], serde_json::json!([9, 18, 27]));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["mu"]).0, 1);
    assert_eq!(run(&["mu", "--map", "no-such-map"]).0, 1);
    assert_eq!(run(&["map", "show", "--map", "(x : y^2 : z)"]).0, 1);
    assert_eq!(run(&["map", "inverse", "--map", "(x^2 : y^2 : z^2)"]).0, 1);
    assert_eq!(run(&["mu", "--map", "sigma", "--format", "dot"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn verify_with_a_short_horizon_skips_persistence_checks() {
    let (code, v) = json(&["verify-paper", "--horizon", "1"]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 17);
    let skipped: Vec<u64> = checks
        .iter()
        .filter(|c| c["status"] == "skipped")
        .map(|c| c["index"].as_u64().unwrap())
        .collect();
    assert_eq!(skipped, vec![10, 12, 13, 14, 16]);
    for c in checks.iter().filter(|c| c["status"] == "skipped") {
        assert!(c["reason"].as_str().unwrap().contains("horizon too small"));
    }
    assert_eq!(v["failed"], 0);
    assert_eq!(code, 0);
}
