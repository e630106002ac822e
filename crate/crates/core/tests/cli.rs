use std::fs;
use std::path::Path;

use nsdfo::cli::{main_with_args, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use nsdfo::solver::RunRecord;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nsdfo").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_writes_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["solve", "--problem", "maxq", "--dim", "20", "--solver", "fast-csdfn", "--out", path(dir.path())]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("final_f"));
    let text = fs::read_to_string(dir.path().join("maxq-n20__fast-csdfn.json")).unwrap();
    let record = RunRecord::from_json(&text).unwrap();
    assert_eq!(record.n, 20);
    assert!(record.final_f <= 1e-3);
}

#[test]
fn solve_respects_budget() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["solve", "--problem", "maxq", "--dim", "20", "--budget", "100", "--out", path(dir.path())]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("reason = budget"));
    let record = RunRecord::from_json(&fs::read_to_string(dir.path().join("maxq-n20__fast-csdfn.json")).unwrap()).unwrap();
    assert!(record.evals <= 100);
    assert!(record.history.iter().all(|&(k, _)| k <= 100));
}

#[test]
fn unknown_problem_is_a_usage_error() {
    let (code, _, err) = run(&["solve", "--problem", "nosuch"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("maxq") && err.contains("l1hilb"), "{err}");
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["solve", "--problem", "maxq", "--solver", "nelder-mead"]).0, EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "cb2", "--dim", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["bench", "--tau", "1.5"]).0, EXIT_USAGE);
}

#[test]
fn config_file_then_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "seed = 5\nbudget = 50\ntheta = 0.25\n").unwrap();
    let out = dir.path().join("o");
    let (code, _, _) = run(&["solve", "--problem", "crescent", "--config", path(&cfg), "--seed", "9", "--out", path(&out)]);
    assert_eq!(code, EXIT_OK);
    let r = RunRecord::from_json(&fs::read_to_string(out.join("crescent-n2__fast-csdfn.json")).unwrap()).unwrap();
    assert_eq!(r.seed, 9);
    assert_eq!(r.config.theta, 0.25);
    assert!(r.evals <= 50);

    fs::write(&cfg, "thetta = 0.25\n").unwrap();
    assert_eq!(run(&["solve", "--problem", "crescent", "--config", path(&cfg)]).0, EXIT_USAGE);
}

#[test]
fn problems_list_is_json_lines() {
    let (code, out, _) = run(&["problems", "list"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 11);
    let cb2 = lines.iter().find(|v| v["name"] == "cb2").unwrap();
    assert_eq!(cb2["dim"], 2);
    assert!(cb2["f_star"].as_f64().is_some());
}

#[test]
fn bench_with_one_tau_then_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let (code, stdout, _) = run(&[
        "bench", "--problem", "crescent", "--problem", "maxl:4", "--tau", "1e-1", "--jobs", "2", "--out", path(&out),
    ]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    let svgs = fs::read_dir(&out).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg")).count();
    assert_eq!(svgs, 2);

    let before = fs::read(out.join("data_tau1e-1.csv")).unwrap();
    assert_eq!(run(&["profiles", "--out", path(&out)]).0, EXIT_OK);
    assert_eq!(fs::read(out.join("data_tau1e-1.csv")).unwrap(), before);

    // A tau the bundle never saw is computed from the stored records.
    assert_eq!(run(&["profiles", "--out", path(&out), "--tau", "1e-4"]).0, EXIT_OK);
    assert!(out.join("perf_tau1e-4.csv").exists());

    fs::remove_file(out.join("records/maxl-n4__csdfn.json")).unwrap();
    let (code, _, err) = run(&["profiles", "--out", path(&out)]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("records/maxl-n4__csdfn.json"), "{err}");
}

#[test]
fn profiles_on_missing_bundle_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["profiles", "--out", path(&dir.path().join("nothing"))]).0, EXIT_FAILURE);
}
