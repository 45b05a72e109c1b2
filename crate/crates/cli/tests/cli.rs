use std::path::Path;
use std::process::{Command, Output};

fn relnav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relnav")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const SMALL: &str = r#"{"seeds": {"start": 0, "count": 3}, "trace": true}"#;

#[test]
fn malformed_config_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), r#"{"seeds": {"start": 0, "count": 3}, "no_such_field": 1}"#);
    let out = dir.path().join("out").display().to_string();
    let o = relnav(&["run", "--config", &cfg, "--out", &out]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = config(dir.path(), r#"{"lambda_fuse": 1.5}"#);
    assert_eq!(relnav(&["run", "--config", &cfg, "--out", &out]).status.code(), Some(2));
}

#[test]
fn run_then_eval_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let out = dir.path().join("run");
    let o = relnav(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("results.jsonl").exists() && out.join("summary.json").exists());

    let o = relnav(&["eval", "--results", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("SR") && text.contains("SPL"), "{text}");

    let o = relnav(&["eval", "--results", out.to_str().unwrap(), "--csv"]);
    assert!(stdout(&o).starts_with("n,sr,spl"));

    let trace = out.join("traces/episode_000000.jsonl");
    let o = relnav(&["trace", "--episode", trace.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn generated_scenes_feed_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let scenes = dir.path().join("scenes");
    let o = relnav(&["gen-scenes", "--config", &cfg, "--out", scenes.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(&scenes).unwrap().count(), 3);
    assert!(scenes.join("scene_000002.json").exists());
    let out = dir.path().join("run");
    let o = relnav(&["run", "--config", &cfg, "--scenes", scenes.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn relation_ablation_lists_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let o = relnav(&["ablate", "--config", &cfg, "--axis", "relations"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for row in ["w/o distance", "w/o directional", "w/o topological", "full"] {
        assert!(text.contains(row), "missing {row}: {text}");
    }
    assert_eq!(relnav(&["ablate", "--config", &cfg, "--axis", "colours"]).status.code(), Some(2));
}

#[test]
fn missing_results_directory_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = relnav(&["eval", "--results", dir.path().join("absent").to_str().unwrap()]);
    assert!(!o.status.success());
    assert_ne!(o.status.code(), Some(0));
}
