use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn endscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endscope")).args(args).output().unwrap()
}

fn endscope_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endscope")).args(args).env(key, value).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(file).to_string_lossy().into_owned()
}

fn schema_for(report: &Value) -> Value {
    let tag = report["schema"].as_str().expect("report names its schema");
    let name = tag.strip_prefix("endscope.").and_then(|t| t.strip_suffix("/1")).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn assert_valid(args: &[&str]) -> Value {
    let report: Value = serde_json::from_str(&stdout(&endscope(args))).unwrap();
    let validator = jsonschema::validator_for(&schema_for(&report)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    report
}

#[test]
fn documented_examples() {
    let table = stdout(&endscope(&["ends", "--graph", "free-group:2", "--rmax", "3", "--horizon", "8", "--format", "table"]));
    let counts: Vec<&str> = table
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .filter_map(|l| l.split_whitespace().nth(1))
        .collect();
    assert_eq!(counts, ["4", "12", "36", "108"], "{table}");

    let line = assert_valid(&["ends", "--graph", "line", "--rmax", "4", "--horizon", "10"]);
    assert_eq!(line["classification"], "2");

    let probe = assert_valid(&["probe", "--graph", "free-group:2", "--seq", "a,aa,aaa,aaaa", "--depth", "0"]);
    assert_eq!(probe["collapse_verified"], true);
    assert_eq!((probe["lambda"].as_str(), probe["mu"].as_str()), (Some("a"), Some("A")));
}

#[test]
fn every_report_matches_its_schema() {
    let (collapse, pull) = (data("collapse.json"), data("pullback.json"));
    assert_valid(&["ends", "--graph", &data("petersen.json")]);
    assert_valid(&["threads", "--graph", "dihedral", "--depth", "2"]);
    let t = assert_valid(&["threads", "--graph", "free-group:2", "--depth", "1", "--axioms"]);
    let reports = t["axiom_reports"].as_array().unwrap();
    assert_eq!(reports.len(), 12);
    assert!(reports.iter().all(|r| r["all_pass"] == true));
    // each thread lies in exactly one frontier-touching component per radius
    for r in reports {
        let inside = r["memberships"].as_array().unwrap().iter().filter(|m| m["member"] == true);
        assert_eq!(inside.filter(|m| !m["set"].as_str().unwrap().starts_with('~')).count(), 2);
    }
    assert_eq!(t["partitions"][0]["components"].as_array().unwrap().len(), 5);
    assert_valid(&["algebra", "--graph", "free-group:2", "--members", "e,a,b", "--word", "a"]);
    assert_valid(&["algebra", "--graph", "line", "--prefix", "-", "--radii", "6,8,10"]);
    assert_valid(&["act", "--graph", "free-group:2", "--word", "a", "--thread", "bbb", "--depth", "0"]);
    assert_valid(&["act", "--graph", "grid2d", "--word", "xy", "--members", "(0,0),(1,0)"]);
    assert_valid(&["probe", "--graph", "line", "--seq", "+1,+2,+3,+4,+5,+6", "--depth", "1"]);
    let c = assert_valid(&["collapse", "--input", &collapse]);
    assert_eq!(c["induced"][0], serde_json::json!([2, 1, 0]));
    let p = assert_valid(&["pullback", "--graph", "free-group:2", "--input", &pull]);
    assert_eq!((p["realized_pairs"].as_u64(), p["possible_pairs"].as_u64()), (Some(4), Some(9)));
    assert_valid(&["export", "--graph", "free-group:2", "--horizon", "2", "--partition", "0", "--format", "json"]);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&endscope(&["frobnicate"])), 64);
    assert_eq!(code(&endscope(&[])), 64);
    assert_eq!(code(&endscope(&["ends", "--rmax", "many"])), 64);
    assert_eq!(code(&endscope(&["--help"])), 0);
    // horizon must exceed depth + 1
    assert_eq!(code(&endscope(&["threads", "--graph", "line", "--depth", "3", "--horizon", "4"])), 2);
    assert_eq!(code(&endscope(&["probe", "--graph", "free-group:2", "--seq", "aa,aa", "--depth", "0"])), 2);
    assert_eq!(code(&endscope(&["ends", "--graph", "line", "--format", "dot"])), 2);
    assert_eq!(code(&endscope(&["ends", "--graph", "no-such-graph"])), 2);
    assert_eq!(code(&endscope_env(&["ends", "--graph", "free-group:2"], "ENDSCOPE_BUDGET", "100")), 3);
    assert_eq!(code(&endscope_env(&["ends", "--graph", "line"], "ENDSCOPE_BUDGET", "zero")), 2);
    assert_eq!(code(&endscope(&["collapse", "--input", "/nonexistent/collapse.json"])), 3);
}

#[test]
fn export_dot() {
    let dot = stdout(&endscope(&["export", "--graph", "line", "--horizon", "3"]));
    assert_eq!(dot.matches("[label=").count(), 7);
    assert_eq!(dot.matches(" -- ").count(), 6);

    let dot = stdout(&endscope(&["export", "--graph", "free-group:2", "--horizon", "2", "--partition", "0"]));
    let colors: BTreeSet<&str> = dot.lines().filter_map(|l| l.split("fillcolor=").nth(1)).collect();
    assert_eq!(colors.len(), 5);

    let path = std::env::temp_dir().join(format!("endscope-cli-{}.dot", std::process::id()));
    let path_str = path.to_str().unwrap();
    let out = endscope(&["export", "--graph", "line", "--horizon", "3", "--out", path_str]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&endscope(&["export", "--graph", "line", "--horizon", "3"])));
    std::fs::remove_file(&path).unwrap();

    let out = endscope(&["export", "--graph", "line", "--horizon", "3", "--out", "/nonexistent/dir/line.dot"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/dir/line.dot"));
}

#[test]
fn saved_sets_round_trip() {
    let report = assert_valid(&["algebra", "--graph", "free-group:2", "--members", "e,a,aa"]);
    let set = &report["set"];
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1/vertex-set.schema.json"))
            .unwrap(),
    )
    .unwrap();
    assert!(jsonschema::validator_for(&schema).unwrap().is_valid(set));

    let path = std::env::temp_dir().join(format!("endscope-set-{}.json", std::process::id()));
    std::fs::write(&path, set.to_string()).unwrap();
    let file = path.to_str().unwrap();
    let moved = assert_valid(&["act", "--graph", "free-group:2", "--word", "A", "--input", file]);
    assert_eq!(moved["image"]["members"], serde_json::json!(["A", "a", "e"]));
    assert_eq!(moved["image"]["window"], set["window"]);
    // the same keys in a different window are refused
    let other = endscope(&["act", "--graph", "free-group:2", "--word", "A", "--horizon", "6", "--input", file]);
    assert_eq!(code(&other), 2);
    std::fs::remove_file(&path).unwrap();
}
