mod common;

use common::example;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run_with_input(args: &[&str], input: &str) -> Run {
    let mut argv = vec!["tiersynth"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = tiersynth::cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with_input(args, "")
}

fn path(name: &str) -> String {
    example(name).to_string_lossy().into_owned()
}

#[test]
fn validate_reports_reachable_states() {
    let r = run(&["validate", &path("robot.json")]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out.trim(), "ok: 56 reachable states");
    let r = run(&["validate", &path("two-road.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn invalid_domains_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(
        &file,
        r#"{"fluents":["g"],"initial":[],"actions":["a"],"reactions":["r","s"],
            "transitions":[{"from":[],"action":"a","reaction":"r","to":["g"]},
                           {"from":[],"action":"a","reaction":"s","to":["g"]}]}"#,
    )
    .unwrap();
    let r = run(&["validate", file.to_str().unwrap(), "--json"]);
    assert_eq!(r.code, 2);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["kind"].is_string());
}

#[test]
fn missing_files_exit_with_one() {
    let r = run(&["validate", "/nonexistent/domain.json"]);
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error:"));
}

#[test]
fn compile_prints_stats_and_dot() {
    let r = run(&["compile", "F g", "--atoms", "g", "--stats"]);
    assert_eq!(r.out.trim(), "states=2 finals=1");
    let r = run(&["compile", "F g", "--minimize", "--dump-dot", "-"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("digraph"));
    let r = run(&["compile", "F g &"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("offset"), "{}", r.err);
}

#[test]
fn check_tiers_explains_failures() {
    let r = run(&["check-tiers", &path("robot.json"), &path("robot.goals.json")]);
    assert_eq!(r.code, 0, "{}", r.err);
    let dir = tempfile::tempdir().unwrap();
    let goals = dir.path().join("goals.json");
    std::fs::write(&goals, r#"["F c", "F g"]"#).unwrap();
    let r = run(&["check-tiers", &path("two-road.json"), goals.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["tier"], 2);
    assert!(!v["trace"]["moves"].as_array().unwrap().is_empty());
}

#[test]
fn synthesize_then_simulate_from_the_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let r = run(&["synthesize", &path("two-road.json"), &path("two-road.goals.json"), "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    for file in ["manifest.json", "objective-1.json", "objective-2.json", "pair-1-2.json"] {
        assert!(out.join(file).exists(), "{file}");
    }
    let r = run(&[
        "simulate",
        &path("two-road.json"),
        "--bundle",
        out.to_str().unwrap(),
        "--env",
        "scripted:r,r1",
        "--json",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["highest_tier"], 2);
    let r = run(&["simulate", &path("robot.json"), "--bundle", out.to_str().unwrap()]);
    assert_eq!(r.code, 2, "bundle for another domain must be refused");
}

#[test]
fn simulate_robot_text_report() {
    let goals = path("robot.goals.json");
    let r = run(&["simulate", &path("robot.json"), "--goals", &goals, "--env", "scripted:close", "--explain"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("regions=[win,pend,pend]"));
    assert!(r.out.contains("tier 1 satisfied"));
    assert!(r.out.trim_end().ends_with("highest tier satisfied: 1"));
    let r = run(&["simulate", &path("robot.json"), "--goals", &goals, "--env", "greedy-cooperative"]);
    assert!(r.out.trim_end().ends_with("highest tier satisfied: 2"), "{}", r.out);
    let r = run(&["simulate", &path("robot.json"), "--goals", &goals, "--env", "random", "--seed", "3"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("tier 1 satisfied"));
}

#[test]
fn interactive_environment_reads_choices() {
    let r = run_with_input(
        &["simulate", &path("two-road.json"), "--goals", &path("two-road.goals.json"), "--env", "interactive"],
        "bogus\n0\nr1\n",
    );
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("not a legal reaction: bogus"));
    assert!(r.out.contains("highest tier satisfied: 2"), "{}", r.out);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["simulate", &path("robot.json")]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}
