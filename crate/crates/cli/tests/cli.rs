use std::process::Command;

use equising_cli::{run, Outcome, EXIT_FAILS, EXIT_HOLDS, EXIT_INPUT, EXIT_UNDECIDED};
use serde_json::Value;

const CUBE: &str = "x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4";
const CUBE_NO_MIDDLE: &str = "x^3+3*t*x^2*y+t^3*y^3-y^4";

fn equising(args: &[&str]) -> Outcome {
    run(std::iter::once("equising").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn cube_family_holds() {
    let o = equising(&["check-family", CUBE, "--conditions", "a,A"]);
    assert_eq!(o.code, EXIT_HOLDS, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["result"]["verdicts"][0]["holds"], true);
    assert_eq!(v["result"]["verdicts"][1]["condition"], "A");
}

#[test]
fn cube_without_middle_term_fails_with_a_witness() {
    let o = equising(&["check-family", CUBE_NO_MIDDLE, "--conditions", "a"]);
    assert_eq!(o.code, EXIT_FAILS);
    let v = json(&o);
    let w = &v["result"]["verdicts"][0]["witnesses"][0];
    assert_eq!(w["dot"], serde_json::json!([1, "2"]));
}

#[test]
fn first_t_order_is_undecided() {
    let o = equising(&["check-family", CUBE_NO_MIDDLE, "--conditions", "a", "--t-order", "1"]);
    assert_eq!(o.code, EXIT_UNDECIDED);
}

#[test]
fn cusp_critical_values() {
    let o = equising(&["critical", "x^2-y^3"]);
    assert_eq!(o.code, EXIT_HOLDS);
    let v = json(&o);
    let pts = v["result"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[0]["branch"], "pos");
    assert_eq!(pts[0]["value"], serde_json::json!(["-1", "3"]));
    let pos = equising(&["critical", "x^2-y^3", "--branch", "pos"]);
    assert_eq!(json(&pos)["result"].as_array().unwrap().len(), 1);
}

#[test]
fn bars_and_cif_share_the_entry_format() {
    let o = equising(&["bars", "x^2-y^3"]);
    let v = json(&o);
    let bar = v["result"].as_array().unwrap().iter().find(|b| b["polar"] == true).unwrap().clone();
    for key in ["branch", "prefix", "height", "I", "L", "m", "polar"] {
        assert!(bar.get(key).is_some(), "missing {key}");
    }
    assert_eq!(bar["height"], "3/2");
    assert_eq!(bar["I"], serde_json::json!(["-1", "0", "1"]));
    let cif = json(&equising(&["cif", "x^2-y^3"]));
    assert!(cif["result"].as_array().unwrap().iter().all(|b| b["polar"] == true));
}

#[test]
fn roots_report_terms_and_multiplicity() {
    let v = json(&equising(&["roots", "x^2-y^3", "--branch", "pos"]));
    let roots = v["result"]["pos"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[0]["exact"], true);
    assert_eq!(roots[0]["terms"][0], serde_json::json!(["3/2", "-1", "0", "0"]));
    assert!(v["result"].get("neg").is_none());
}

#[test]
fn polygon_relative_to_an_arc() {
    let v = json(&equising(&["polygon", "x^2+2*x*y-t*y^2", "--t", "1/2", "--arc", "1:-1"]));
    assert_eq!(v["result"]["vertices"], serde_json::json!([[2, "0"], [0, "2"]]));
    let v0 = json(&equising(&["polygon", "x^2+2*x*y-t*y^2"]));
    assert_eq!(v0["result"]["vertices"], serde_json::json!([[2, "0"], [1, "1"]]));
}

#[test]
fn flow_check_reports_trajectories() {
    let o = equising(&["flow-check", "x^2+2*x*y-t*y^2", "--starts", "4", "--t-span", "0:1/8"]);
    assert_eq!(o.code, EXIT_HOLDS, "{}", o.stderr);
    let v = json(&o);
    let tr = v["result"]["trajectories"].as_array().unwrap();
    assert_eq!(tr.len(), 4);
    assert!(tr.iter().all(|t| t["status"] == "ok" && t["max_drift"].as_f64().unwrap() <= 1e-6));
}

#[test]
fn euler_check_orders_and_rejections() {
    let v = json(&equising(&["euler-check", "x^2-y^3", "--u0", "2"]));
    assert_eq!(v["result"]["order"], "3");
    assert_eq!(v["result"]["h"], "3/2");
    let o = equising(&["euler-check", "x^3-2*x^2*y+x*y^2", "--u0", "1"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("multiple root"));
}

#[test]
fn corpus_is_seed_independent() {
    let a = json(&equising(&["corpus", "--seed", "0"]));
    let b = json(&equising(&["corpus", "--seed", "17"]));
    let observed = |v: &Value| v["result"]["cases"].as_array().unwrap().iter().map(|c| c["observed"].clone()).collect::<Vec<_>>();
    assert_eq!(observed(&a), observed(&b));
    assert_eq!(a["result"]["all_pass"], true);
}

#[test]
fn corpus_at_first_order_is_undecided() {
    let o = equising(&["corpus", "--t-order", "1", "--format", "text"]);
    assert_eq!(o.code, EXIT_UNDECIDED);
    let line = o.stdout.lines().find(|l| l.contains("cube_without_middle_term")).unwrap();
    assert!(line.contains("a=undecided"), "{line}");
}

#[test]
fn input_errors_exit_with_three() {
    assert_eq!(equising(&["polygon", "x^^2"]).code, EXIT_INPUT);
    assert_eq!(equising(&["polygon", "2x"]).code, EXIT_INPUT);
    assert_eq!(equising(&["nonsense"]).code, EXIT_INPUT);
    assert_eq!(equising(&["check-family", CUBE, "--conditions", "b"]).code, EXIT_INPUT);
    assert_eq!(equising(&["check-family", CUBE, "--t-grid", "1/2,1"]).code, EXIT_INPUT);
    assert_eq!(equising(&["critical"]).code, EXIT_INPUT);
    assert_eq!(equising(&["critical", "x^2-y^3", "--precision", "4"]).code, EXIT_INPUT);
}

#[test]
fn help_exits_cleanly() {
    let o = equising(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("check-family"));
}

#[test]
fn expressions_can_come_from_files() {
    let path = std::env::temp_dir().join(format!("equising-cli-test-{}.txt", std::process::id()));
    std::fs::write(&path, "x^2-y^3\n").unwrap();
    let o = equising(&["critical", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.code, EXIT_HOLDS, "{}", o.stderr);
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_equising"))
        .args(["critical", "x^2-y^3"])
        .env("EQUISING_PRECISION", "192")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 192);
    let bad = Command::new(env!("CARGO_BIN_EXE_equising"))
        .args(["critical", "x^2-y^3"])
        .env("EQUISING_PRECISION", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["check-family", CUBE_NO_MIDDLE, "--seed", "5"];
    assert_eq!(equising(&args).stdout, equising(&args).stdout);
}

#[test]
fn reports_validate_against_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let invocations: &[&[&str]] = &[
        &["polygon", "x^2+2*x*y-t*y^2", "--t", "1/2", "--arc", "1:-1"],
        &["roots", "x^2-2*y^2"],
        &["bars", "x^3-3*x*y^2-y^5"],
        &["cif", "x^2-y^3"],
        &["critical", "x^3-3*x*y^2-y^5"],
        &["check-family", CUBE],
        &["check-family", CUBE_NO_MIDDLE, "--t-order", "1"],
        &["check-family", "x^4-t^2*x^2*y^2-y^4"],
        &["flow-check", "x^2+2*x*y-t*y^2", "--starts", "3"],
        &["euler-check", "x^2-y^3", "--u0", "2"],
        &["corpus", "--t-order", "2"],
    ];
    for args in invocations {
        let o = equising(args);
        assert!(o.code != EXIT_INPUT, "{args:?}: {}", o.stderr);
        let v = json(&o);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let mut broken = json(&equising(&["critical", "x^2-y^3"]));
    broken["config"]["branch"] = "sideways".into();
    assert!(!validator.is_valid(&broken));
}
