use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ca-signals"));
    c.env_remove("CA_SIGNALS_MEM_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_log2_eight_steps() {
    let o = run(&["simulate", "--ca", "log2", "--steps", "8"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let slices = v.as_array().unwrap();
    assert_eq!(slices.len(), 9);
    assert_eq!(slices[0], serde_json::json!({"t":0,"cells":[{"u":[0,0],"s":"1"}]}));
}

#[test]
fn simulate_xy_seed_only() {
    let o = run(&["simulate", "--ca", "xy:2,3", "--steps", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o), serde_json::json!([{"t":0,"cells":[{"u":[0,0],"s":"π_1"}]}]));
}

#[test]
fn rule_file_reproduces_the_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("log2.rules");
    let printed = run(&["rules", "print", "--ca", "log2"]);
    assert_eq!(code(&printed), 0);
    fs::write(&rules, &printed.stdout).unwrap();
    assert_eq!(code(&run(&["rules", "check", path(&rules)])), 0);
    let from_file = run(&["simulate", "--ca", &format!("file:{}", path(&rules)), "--steps", "4"]);
    let builtin = run(&["simulate", "--ca", "log2", "--steps", "4"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, builtin.stdout);
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["simulate", "--ca", "xy:3,4", "--steps", "40"]);
    let b = run(&["simulate", "--ca", "xy:3,4", "--steps", "40"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["search", "two-state", "--limit", "64"]);
    let b = run(&["search", "two-state", "--limit", "64"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn budget_overflow_keeps_a_marked_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = bin()
        .env("CA_SIGNALS_MEM_BUDGET", "100")
        .args(["simulate", "--ca", "log2", "--steps", "500", "--out", path(&out)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let entries = v.as_array().unwrap();
    let last = entries.last().unwrap();
    assert_eq!(last["truncated"], Value::Bool(true));
    assert_eq!(last["last_completed"].as_u64().unwrap() as usize, entries.len() - 2);

    let bad = bin().env("CA_SIGNALS_MEM_BUDGET", "lots").args(["simulate", "--steps", "2"]).output().unwrap();
    assert_eq!(code(&bad), 2);
}

fn dump(dir: &Path, ca: &str, steps: &str) -> String {
    let out = dir.join(format!("{}.json", ca.replace([':', ','], "_")));
    assert_eq!(code(&run(&["simulate", "--ca", ca, "--steps", steps, "--out", path(&out)])), 0);
    path(&out).to_string()
}

#[test]
fn render_text_modes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dump(dir.path(), "log2", "20");
    let o = run(&["render", "--diagram", &d, "--mode", "slice", "--t", "0"]);
    assert_eq!((code(&o), stdout(&o)), (0, "1\n".to_string()));
    let o = run(&["render", "--diagram", &d, "--mode", "wplane", "--k", "5"]);
    let row0 = stdout(&o).lines().next().unwrap().to_string();
    assert!(row0.starts_with("011.") && row0[3..].chars().all(|c| c == '.'), "{row0}");

    let q = dump(dir.path(), "quiescent", "3");
    let o = run(&["render", "--diagram", &q, "--mode", "slice", "--t", "2"]);
    assert_eq!(stdout(&o), ".....\n".repeat(5));

    assert_eq!(code(&run(&["render", "--diagram", &d, "--mode", "hex", "--t", "0"])), 2);
    assert_eq!(code(&run(&["render", "--diagram", &d, "--mode", "slice", "--t", "21"])), 2);
    assert_eq!(code(&run(&["render", "--diagram", &d, "--mode", "slice"])), 2);
}

#[test]
fn render_ppm_frames() {
    let dir = tempfile::tempdir().unwrap();
    let d = dump(dir.path(), "log2", "3");
    let frames = dir.path().join("frames");
    assert_eq!(code(&run(&["render", "--diagram", &d, "--mode", "ppm", "--out", path(&frames)])), 0);
    for t in 0..=3 {
        let f = fs::read(frames.join(format!("slice_{t:04}.ppm"))).unwrap();
        assert!(f.starts_with(b"P6\n7 7\n255\n"));
    }
    let colors: Value = serde_json::from_str(&fs::read_to_string(frames.join("colors.json")).unwrap()).unwrap();
    assert_eq!(colors["λ"], serde_json::json!([255, 255, 255]));
    assert!(colors.get("1").is_some() && colors.get("0").is_some());
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&run(&["verify", "xy", "--x", "2", "--y", "4"])), 2);
    let o = run(&["verify", "xy", "--x", "2", "--y", "3", "--steps", "300"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["pass"], Value::Bool(true));
    let o = run(&["verify", "log2", "--steps", "300", "--rows", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["row_mismatches"]["count"], 0);
    let o = run(&["verify", "bounds", "--rmax", "2", "--window", "128"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["diagonals"].as_array().unwrap().len(), 6);
    // A window this short sees the binary slow-down repeat.
    let o = run(&["verify", "basic", "--followers", "3", "--window", "32", "--log2-window", "6"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["pass"], Value::Bool(false));
}

#[test]
fn search_subset() {
    let o = run(&["search", "two-state", "--limit", "16"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["total"], 16);
    assert_eq!(v["passing"], 0);
    assert_eq!(v["order_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn analyze_period_and_diagonal() {
    let o = run(&["analyze", "period", "--ca", "log2", "--i", "0,0", "--horizon", "64"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!((v["alpha"].as_str(), v["beta"].as_str()), (Some(""), Some("10")));

    let o = run(&["analyze", "diagonal", "--ca", "log2", "--i", "-1,0", "--len", "10"]);
    assert_eq!(code(&o), 0);
    let letters = json(&o)["letters"].as_array().unwrap().clone();
    assert_eq!(letters.len(), 10);
    assert!(letters.iter().all(|s| s == "λ"));

    assert_eq!(code(&run(&["analyze", "diagonal", "--i", "0,0,0"])), 2);
    assert_eq!(code(&run(&["analyze", "period", "--i", "0,0", "--horizon", "3"])), 2);
}

#[test]
fn detect_then_gap() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("s.json");
    let o = run(&["detect", "--ca", "log2", "--steps", "600", "--out", path(&sig)]);
    assert_eq!(code(&o), 0);
    let o = run(&["analyze", "gap", "--signal", path(&sig)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["classification"], "LogarithmicOrAbove");

    let explicit = run(&["detect", "--ca", "log2", "--partition", "0:(1,1);1:(-1,-1);λ:(-1,-1)", "--steps", "600"]);
    assert_eq!(explicit.stdout, fs::read(&sig).unwrap());
    let other = run(&["detect", "--ca", "log2", "--steps", "600", "--convention", "aswritten"]);
    assert_eq!(code(&other), 0);
    assert_ne!(other.stdout, explicit.stdout);

    assert_eq!(code(&run(&["detect", "--ca", "xy:2,3", "--steps", "10"])), 2);
    assert_eq!(code(&run(&["detect", "--ca", "log2", "--partition", "0:(1,1)", "--steps", "10"])), 2);
}

#[test]
fn follow_with_a_follower_file() {
    let dir = tempfile::tempdir().unwrap();
    let ca = ca_signals_core::automaton::builtin_xy(2, 3).unwrap();
    let f = ca_signals_core::signals::follower_for_xy(&ca, 2, 3).unwrap();
    let file = dir.path().join("f.json");
    fs::write(&file, ca_signals::formats::FollowerFile::from_follower(&ca, &f).to_json()).unwrap();
    let a = run(&["follow", "--ca", "xy:2,3", "--steps", "200"]);
    let b = run(&["follow", "--ca", "xy:2,3", "--follower", path(&file), "--steps", "200"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&run(&["follow", "--ca", "log2", "--steps", "10"])), 2);
}

#[test]
fn bad_rule_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.rules");
    fs::write(&p, "states: λ 1\nseed: 1\nneighborhood: trellis 2\nrule: λ λ λ λ -> λ\n").unwrap();
    let o = run(&["rules", "check", path(&p)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not total"));
    assert_eq!(code(&run(&["simulate", "--ca", &format!("file:{}", path(&p)), "--steps", "1"])), 2);
    assert_eq!(code(&run(&["simulate", "--ca", "file:/nonexistent", "--steps", "1"])), 2);
}
