use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/case_study.net");

fn s4pr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s4pr"))
        .args(args)
        .env_remove("S4PR_NODE_CAP")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = s4pr(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn fixture_with(edit: impl FnOnce(&mut Value)) -> String {
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(FIXTURE).unwrap()).unwrap();
    edit(&mut doc);
    doc.to_string()
}

#[test]
fn validate_fixture() {
    let out = s4pr(&["validate", FIXTURE]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validate_duplicate_place() {
    let text = fixture_with(|d| {
        let first = d["places"][0].clone();
        d["places"].as_array_mut().unwrap().push(first);
    });
    let p = scratch("dup.net", &text);
    let out = s4pr(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DUP_PLACE"));
}

#[test]
fn validate_malformed() {
    let p = scratch("bad.net", "{\n  \"places\": [\n  oops");
    let out = s4pr(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn validate_reports_class_diagnostics() {
    let text = fixture_with(|d| d["places"][1]["tokens"] = 1.into());
    let p = scratch("marked_op.net", &text);
    let out = s4pr(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("OPERATION_MARKED: "));
}

#[test]
fn missing_file_is_io_error() {
    assert_eq!(s4pr(&["reach", "/nonexistent/x.net"]).status.code(), Some(2));
}

#[test]
fn reach_counts() {
    let r = report(&["reach", FIXTURE]);
    assert_eq!(r["command"], "reach");
    assert_eq!(r["results"]["nodes"], 23);
    assert_eq!(r["results"]["deadlocks"].as_array().unwrap().len(), 0);
    assert_eq!(r["results"]["all_live"], true);

    let r = report(&["reach", FIXTURE, "--override-marking", "p12=1"]);
    assert_eq!(r["results"]["nodes"], 19);
    assert!(!r["results"]["deadlocks"].as_array().unwrap().is_empty());

    let r = report(&["reach", FIXTURE, "--override-marking", "p12=0"]);
    assert_eq!(r["results"]["nodes"], 7);
}

#[test]
fn reach_cap_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_s4pr"))
        .args(["reach", FIXTURE])
        .env("S4PR_NODE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NODE_CAP"));
}

#[test]
fn reach_writes_dot() {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("reach.dot");
    report(&["reach", FIXTURE, "--override-marking", "p12=1", "--dot", p.to_str().unwrap()]);
    let dot = std::fs::read_to_string(&p).unwrap();
    assert_eq!(dot.matches("label=\"M").count(), 19);
    assert!(dot.contains("doubleoctagon"));
}

#[test]
fn export_dot_stdout() {
    let out = s4pr(&["export-dot", FIXTURE]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("label=\"M").count(), 23);
}

#[test]
fn classify_counts() {
    let r = report(&["classify", FIXTURE, "--resource", "p12"]);
    assert_eq!(r["results"]["robust_count"], 12);
    assert_eq!(r["results"]["unrobust_count"], 11);
    let robust = r["results"]["robust"].as_array().unwrap();
    assert_eq!(robust[0], serde_json::json!([1, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 2]));
    let rows: Vec<Vec<u32>> = serde_json::from_value(r["results"]["robust"].clone()).unwrap();
    assert!(rows.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(r["results"]["independent_subnets"], serde_json::json!([3]));
}

#[test]
fn classify_errors() {
    let out = s4pr(&["classify", FIXTURE, "--resource", "p11"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NOT_UNRELIABLE"));

    let p = scratch("reliable.net", &fixture_with(|d| d["unreliable"] = serde_json::json!([])));
    let out = s4pr(&["classify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NO_UNRELIABLE"));
}

#[test]
fn synthesize_one_monitor() {
    let r = report(&["synthesize", FIXTURE, "--resource", "p12", "--j", "1"]);
    let res = &r["results"];
    let monitors = res["monitors"].as_array().unwrap();
    assert_eq!(monitors.len(), 1);
    assert_eq!(monitors[0]["weights"], serde_json::json!({"p2": 1, "p3": 1, "p4": 2}));
    assert_eq!(monitors[0]["bound"], 1);
    assert_eq!(monitors[0]["initial_tokens"], 1);
    assert_eq!(monitors[0]["incidence_row"], serde_json::json!([-1, 0, -1, 2, 0, 0, 0, 0, 0]));
    assert_eq!(res["verification"]["passed"], true);
    assert_eq!(res["verification"]["reachable_projections"], 12);
    assert_eq!(res["projection_places"], serde_json::json!(["p2", "p3", "p4"]));
}

#[test]
fn synthesize_model_n_index() {
    let out = s4pr(&["synthesize", FIXTURE, "--resource", "p12", "--j", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("USE_MODEL_N"));
}

#[test]
fn synthesize_threshold_policy() {
    let r = report(&["synthesize", FIXTURE, "--resource", "p12", "--j", "1", "--policy", "threshold"]);
    assert_eq!(r["results"]["forbidden_count"], 7);
}

#[test]
fn synthesize_tiny_bounds_unseparable() {
    let out = s4pr(&["synthesize", FIXTURE, "--j", "1", "--amax", "0", "--bmax", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UNSEPARABLE"));
}

#[test]
fn simulate_total_failure() {
    let sc = scratch("ff.json", r#"[{"event":"FAIL"},{"event":"FAIL"},{"event":"AUTO","count":20,"seed":7}]"#);
    let tr = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ff_trace.json");
    let r = report(&["simulate", FIXTURE, "--resource", "p12", "--scenario", sc.to_str().unwrap(), "--trace", tr.to_str().unwrap()]);
    assert_eq!(r["results"]["summary"]["final_model"], 2);
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(&tr).unwrap()).unwrap();
    for step in &trace["steps"].as_array().unwrap()[2..] {
        let e = step["event"].as_str().unwrap();
        assert!(e == "AUTO t8" || e == "AUTO t9", "{e}");
        assert_eq!(step["model"], 2);
    }
}

#[test]
fn simulate_fail_repair() {
    let sc = scratch("fr.json", r#"[{"event":"FAIL"},{"event":"REPAIR"}]"#);
    let r = report(&["simulate", FIXTURE, "--scenario", sc.to_str().unwrap()]);
    assert_eq!(r["results"]["summary"]["final_model"], 0);
    assert_eq!(r["results"]["final_marking"], serde_json::json!([2, 0, 0, 0, 1, 0, 0, 1, 0, 1, 2, 2, 0]));
}

#[test]
fn simulate_repair_first_rejected() {
    let sc = scratch("r.json", r#"[{"event":"REPAIR"}]"#);
    let r = report(&["simulate", FIXTURE, "--scenario", sc.to_str().unwrap()]);
    assert_eq!(r["results"]["summary"]["rejected"], 1);
    assert_eq!(r["results"]["summary"]["final_model"], 0);
}

#[test]
fn simulate_bad_scenario() {
    let sc = scratch("bad_sc.json", r#"[{"event":"EXPLODE"}]"#);
    assert_eq!(s4pr(&["simulate", FIXTURE, "--scenario", sc.to_str().unwrap()]).status.code(), Some(2));
    let sc = scratch("unk_sc.json", r#"[{"event":"FIRE","transition":"t42"}]"#);
    assert_eq!(s4pr(&["simulate", FIXTURE, "--scenario", sc.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn reports_are_reproducible() {
    let sc = scratch("auto.json", r#"[{"event":"FAIL"},{"event":"AUTO","count":50}]"#);
    for args in [
        vec!["reach", FIXTURE],
        vec!["classify", FIXTURE],
        vec!["synthesize", FIXTURE],
        vec!["simulate", FIXTURE, "--scenario", sc.to_str().unwrap(), "--seed", "11"],
    ] {
        let a = s4pr(&args);
        let b = s4pr(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
