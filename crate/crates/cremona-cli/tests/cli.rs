use std::process::{Command, Output};

use serde_json::Value;

fn cremona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona")).args(args).output().expect("the binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cremona(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    assert_eq!(v["schema"], 1);
    (v, out.status.code().unwrap())
}

fn result<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["results"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap_or_else(|| panic!("no result {name} in {v}"))
}

#[test]
fn enumerate_gives_eighteen_del_pezzo_words() {
    let (v, code) = report(&["graph", "enumerate", "--max-sl", "5", "--kind", "delpezzo"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v, "del-pezzo count")["value"], 18);
    assert_eq!(result(&v, "del-pezzo words equal the reference table")["pass"], true);
}

#[test]
fn point_counts_along_a_word() {
    let (v, code) = report(&["graph", "counts", "--word", "P2 -2,1-> D8 -3,1-> D6", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v, "counts stay at least 3")["value"], serde_json::json!([7, 5, 3]));
}

#[test]
fn identity_has_no_reflection_factors() {
    let (v, code) = report(&["qform", "factor", "--form", "x^2+y^2+z^2", "--matrix", "1,0,0;0,1,0;0,0,1"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v, "matrix")["value"]["factors"], 0);
}

#[test]
fn exit_codes_separate_usage_errors_from_failed_checks() {
    let out = cremona(&["field", "--spec", "F3[i]/(i^2-1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--spec"));
    let out = cremona(&["graph", "classify", "--word", "P2 -2,1->"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--word"));
    assert_eq!(cremona(&["frobnicate"]).status.code(), Some(2));
    let (_, code) = report(&["graph", "counts", "--word", "P2 -9,1-> D8", "--q", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["qform", "factor", "--field", "F9", "--form", "x^2+y^2", "--random", "5", "--seed", "11", "--json"];
    // F9 is not a text spec; the tower form is.
    let out = cremona(&args);
    assert_eq!(out.status.code(), Some(2));
    let args = ["qform", "factor", "--field", "F3[i]/(i^2+1)", "--form", "x^2 - (i+1)*y^2", "--random", "5", "--seed", "11", "--json"];
    let (a, b) = (cremona(&args), cremona(&args));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let other = cremona(&["qform", "factor", "--field", "F3[i]/(i^2+1)", "--form", "x^2 - (i+1)*y^2", "--random", "5", "--seed", "12", "--json"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn out_path_receives_the_report() {
    let path = std::env::temp_dir().join(format!("cremona-cli-test-{}.json", std::process::id()));
    let out = cremona(&["pieces", "validate", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("PASS\n"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 28);
}

#[test]
fn pieces_resolve_by_any_alias() {
    let (v, code) = report(&["pieces", "show", "<D8,1,3>"]);
    assert_eq!(code, 0);
    let piece = &result(&v, "piece")["value"];
    assert_eq!(piece["canonical"], "<D6,1,1>");
    assert_eq!(result(&v, "symmetry")["value"], Value::Null);
    let (v, _) = report(&["pieces", "list"]);
    assert_eq!(result(&v, "count")["value"], 27);
}

#[test]
fn reduce_uses_the_f2_route_only_when_asked() {
    let w = "P2 -2,1-> D8 -3,1-> D6 -3,3-> D6 -1,3-> D8 -1,2-> P2";
    let (v, code) = report(&["reduce", "--word", w, "--field", "f2"]);
    assert_eq!(code, 0);
    let trace = &result(&v, "trace")["value"];
    assert_eq!(trace["steps"][0]["rule"], "case-iv-f2");
    let (v, code) = report(&["reduce", "--word", w]);
    assert_eq!(code, 0);
    let trace = &result(&v, "trace")["value"];
    assert_eq!(trace["steps"][0]["rule"], "case-iv");
    assert!(!trace["assumptions"].as_array().unwrap().is_empty());
}

#[test]
fn jonq22_involutions_descend() {
    let (v, code) = report(&["jonq22", "gen", "--L", "x^2+1", "--Lp", "x^2+1", "--lambda", "th"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(result(&v, "lambda 0")["value"]["mu"], "1");
    let (v, code) = report(&["jonq22", "gen", "--L", "x^2-2", "--Lp", "x^2-3", "--count", "3", "--seed", "5"]);
    assert_eq!(code, 0, "{v}");
    let (_, code) = report(&["jonq22", "check", "--field", "F5", "--L", "x^2-2", "--Lp", "x^2-3"]);
    assert_eq!(code, 0);
}

#[test]
fn fibration_bridge_and_factorization() {
    let (v, code) = report(&["fib", "bridge", "--field", "F2", "--count", "3"]);
    assert_eq!(code, 0, "{v}");
    let (v, code) = report(&["fib", "factor", "--field", "F5", "--count", "2"]);
    assert_eq!(code, 0, "{v}");
    let (v, code) = report(&["fib", "build", "--field", "Q", "--two-two", "1,0;-2,0"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v, "kind")["value"], "type-2+2");
}

#[test]
fn quadratic_involutions_from_random_frames() {
    let (v, code) = report(&["map", "involution", "--field", "F7", "--random-frames", "4", "--seed", "3"]);
    assert_eq!(code, 0, "{v}");
    let (v, code) = report(&["map", "compose", "--f", "y*z;x*z;x*y", "--g", "y*z;x*z;x*y"]);
    assert_eq!(code, 0);
    assert_eq!(result(&v, "composition agrees with the raw substitution")["value"]["degree"], 1);
}
