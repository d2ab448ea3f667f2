use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dqw::report::render_text;
use dqw::{run_scenario, Command as Step, Overrides, Scenario, Status};
use serde_json::Value;

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn dqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqw")).args(args).output().expect("binary runs")
}

fn dqw_run(name: &str, extra: &[&str]) -> Output {
    let path = scenario_path(name);
    let mut args = vec!["run", "--scenario", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    dqw(&args)
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timings(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("time ")).collect::<Vec<_>>().join("\n")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dqw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn shipped_scenarios_exit_codes() {
    let expected = [
        ("moyal-r2-delta", 0),
        ("moyal-r2-solver", 0),
        ("linear-poisson-2d", 0),
        ("zero-poisson", 0),
        ("perturbed-c2", 1),
        ("k0", 0),
        ("empty", 0),
    ];
    for (name, code) in expected {
        let out = dqw_run(name, &[]);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json_of(&out)["exit_code"], code, "{name}");
    }
}

#[test]
fn delta_scenario_reports_the_counterexample() {
    let report = json_of(&dqw_run("moyal-r2-delta", &[]));
    let pos = report["commands"].as_array().unwrap().iter().find(|c| c["command"] == "check-pos").unwrap();
    assert_eq!(pos["outcome"]["undeformed"]["values"][0], serde_json::json!(["0", "-1"]));
    assert_eq!(pos["outcome"]["undeformed"]["outcome"], "negative");
    assert!(pos["outcome"]["undeformed"]["witness"].as_str().unwrap().contains("[\"0\",\"-1\"]"));
    assert_eq!(pos["outcome"]["deformed"]["outcome"], "positive");
    assert_eq!(pos["status"], "pass");
}

#[test]
fn perturbed_scenario_stops_at_validate_with_a_witness() {
    let report = json_of(&dqw_run("perturbed-c2", &[]));
    let cmds = report["commands"].as_array().unwrap();
    assert_eq!(cmds.len(), 1);
    assert_eq!(cmds[0]["command"], "validate");
    assert_eq!(cmds[0]["status"], "fail");
    assert!(cmds[0]["witness"].as_str().unwrap().starts_with("associativity"));
    assert_eq!(cmds[0]["outcome"]["associativity"]["witness"].as_array().unwrap().len(), 3);
    assert_eq!(report["skipped"], serde_json::json!(["build-tau", "deform", "check-pos"]));
}

#[test]
fn k0_reduces_to_classical_positivity() {
    let report = json_of(&dqw_run("k0", &[]));
    let pos = &report["commands"][3]["outcome"];
    assert_eq!(pos["deformed"]["values"], pos["undeformed"]["values"]);
    assert_eq!(report["commands"][1]["outcome"]["component_terms"], serde_json::json!([1]));
}

#[test]
fn empty_scenario_has_no_command_entries() {
    let report = json_of(&dqw_run("empty", &[]));
    assert_eq!(report["commands"], serde_json::json!([]));
    assert_eq!(report["status"], "pass");
}

#[test]
fn text_output_is_the_rendering_of_the_json_output() {
    for name in ["moyal-r2-delta", "perturbed-c2", "k0", "zero-poisson"] {
        let json = dqw_run(name, &["--format", "json"]);
        let text = dqw_run(name, &["--format", "text"]);
        let rendered = render_text(&json_of(&json));
        assert_eq!(without_timings(&rendered), without_timings(&String::from_utf8(text.stdout).unwrap()), "{name}");
    }
}

#[test]
fn verbs_run_a_single_command() {
    let path = scenario_path("moyal-r2-delta");
    for (verb, name) in
        [("validate", "validate"), ("build-tau", "build-tau"), ("deform", "deform"), ("check-pos", "check-pos")]
    {
        let out = dqw(&[verb, "--scenario", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{verb}");
        let report = json_of(&out);
        let cmds = report["commands"].as_array().unwrap();
        assert_eq!(cmds.len(), 1);
        assert_eq!(cmds[0]["command"], name);
    }
    let out = dqw(&["validate", "--scenario", scenario_path("perturbed-c2").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn overrides_and_out_file() {
    let out_path = std::env::temp_dir().join(format!("dqw-cli-out-{}.json", std::process::id()));
    let out = dqw_run("zero-poisson", &["--max-order", "2", "--seed", "99", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["order"], 2);
    assert_eq!(report["seed"], 99);
    let default = json_of(&dqw_run("zero-poisson", &[]));
    assert_ne!(report["inputs_digest"], default["inputs_digest"]);
    std::fs::remove_file(out_path).ok();
}

#[test]
fn malformed_json_exits_two_with_a_location() {
    let path = temp_file("broken.json", "{\n  \"name\": \"broken\",\n  \"n\": 2,\n  \"order\": \n}\n");
    let out = dqw(&["run", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn configuration_errors_exit_two() {
    let cases = [
        ("unknown-field.json", r#"{"name":"x","n":2,"order":2,"star_product":{"kind":"zero"},"colour":1}"#),
        (
            "dimension.json",
            r#"{"name":"x","n":3,"order":2,"star_product":{"kind":"constant_theta","theta":[["0","1"],["-1","0"]]}}"#,
        ),
        (
            "closed-form.json",
            r#"{"name":"x","n":2,"order":2,"star_product":{"kind":"zero"},"tau":{"kind":"closed_form"}}"#,
        ),
        (
            "test-size.json",
            r#"{"name":"x","n":2,"order":2,"star_product":{"kind":"zero"},
                "functional":{"size":2,"atoms":[]},"tests":{"explicit":[[{"q":[0,0],"coeff":"1"}]]}}"#,
        ),
    ];
    for (file, body) in cases {
        let path = temp_file(file, body);
        let out = dqw(&["run", "--scenario", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{file}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = dqw(&["run", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_test_set_is_inconclusive() {
    let path = temp_file(
        "no-tests.json",
        r#"{"name":"no-tests","n":2,"order":2,"star_product":{"kind":"constant_theta","theta":[["0","1"],["-1","0"]]}}"#,
    );
    let out = dqw(&["run", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["status"], "inconclusive");
}

#[test]
fn solver_cap_makes_build_tau_inconclusive() {
    let path = scenario_path("moyal-r2-solver");
    let out = Command::new(env!("CARGO_BIN_EXE_dqw"))
        .args(["run", "--scenario", path.to_str().unwrap()])
        .env("DQW_MAX_SOLVER_CELLS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let report = json_of(&out);
    assert_eq!(report["commands"][1]["command"], "build-tau");
    assert_eq!(report["commands"][1]["status"], "inconclusive");
    assert_eq!(report["skipped"], serde_json::json!(["deform", "check-pos"]));
}

#[test]
fn check_pos_on_a_non_associative_product_exits_one() {
    let out = dqw(&["check-pos", "--scenario", scenario_path("perturbed-c2").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert_eq!(report["commands"][0]["command"], "check-pos");
    assert_eq!(report["commands"][0]["status"], "fail");
    assert!(report["commands"][0]["witness"].as_str().unwrap().contains("stage"));
}

#[test]
fn scenarios_round_trip_exactly() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let s = Scenario::load(&path).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back, s, "{}", path.display());
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn library_reports_replay_identically() {
    let s = Scenario::load(&scenario_path("moyal-r2-solver")).unwrap();
    let a = run_scenario(&s, None).unwrap();
    let b = run_scenario(&s, None).unwrap();
    assert_eq!(a.content().to_string(), b.content().to_string());
    let c = run_scenario(&s.clone().with_overrides(Overrides { max_order: None, seed: Some(12) }), None).unwrap();
    assert_ne!(a.content(), c.content());
    assert_eq!(a.command(Step::CheckPos).unwrap().status, Status::Pass);
}
