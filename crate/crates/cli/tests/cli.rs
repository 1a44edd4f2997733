use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn ashg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ashg")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The tight example split into game, partition and altered instance files.
fn fig3_files(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let out = ashg(&["gen", "fig3"]);
    assert!(out.status.success());
    let b = stdout_json(&out);
    let g = write(dir, "g.json", &b["game"]);
    let p = write(dir, "p.json", &b["partition"]);
    let inst = json!({"game": b["game"], "partition": b["partition"], "update": b["update"], "notion": "cns", "k": 4});
    (g, p, write(dir, "inst.json", &inst))
}

#[test]
fn check_reports_stable_start() {
    let dir = TempDir::new().unwrap();
    let (g, p, _) = fig3_files(dir.path());
    let out = ashg(&["check", "--game", s(&g), "--partition", s(&p), "--notion", "cns"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"stable": true}));
}

#[test]
fn check_exits_one_when_unstable() {
    let dir = TempDir::new().unwrap();
    let (g, _, _) = fig3_files(dir.path());
    let single = write(dir.path(), "s.json", &json!([[0], [1], [2], [3], [4], [5], [6], [7]]));
    let out = ashg(&["check", "--game", s(&g), "--partition", s(&single), "--notion", "ns"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["stable"], json!(false));
    assert!(!v["deviations"].as_array().unwrap().is_empty());
}

#[test]
fn distance_relabels_agents() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &json!([[1, 2], [3]]));
    let b = write(dir.path(), "b.json", &json!([[1, 2, 3]]));
    let out = ashg(&["distance", "--a", s(&a), "--b", s(&b)]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out), json!({"distance": 1}));
    let c = write(dir.path(), "c.json", &json!([[1, 2], [4]]));
    assert_eq!(ashg(&["distance", "--a", s(&a), "--b", s(&c)]).status.code(), Some(2));
}

#[test]
fn malformed_json_exits_two_with_position() {
    let dir = TempDir::new().unwrap();
    let (g, _, _) = fig3_files(dir.path());
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "[[0, 1],").unwrap();
    let out = ashg(&["check", "--game", s(&g), "--partition", s(&bad), "--notion", "ns"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn nearest_and_repair_agree_on_tight_example() {
    let dir = TempDir::new().unwrap();
    let (_, _, inst) = fig3_files(dir.path());
    let near = stdout_json(&ashg(&["nearest", "--instance", s(&inst)]));
    assert_eq!(near["found"], json!(true));
    assert_eq!(near["distance"], json!(4));
    let sym = stdout_json(&ashg(&["nearest", "--instance", s(&inst), "--symmetry"]));
    assert_eq!(sym["distance"], json!(4));
    let rep = stdout_json(&ashg(&["repair", "--instance", s(&inst), "--algorithm", "close-cns"]));
    assert_eq!(rep["distance"], json!(4));
    assert!(rep["steps"]["steps"].is_array());
}

#[test]
fn tiny_visited_cap_exits_three() {
    let dir = TempDir::new().unwrap();
    let (_, _, inst) = fig3_files(dir.path());
    let out = ashg(&["nearest", "--instance", s(&inst), "--cap", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn random_generation_needs_a_seed_and_is_deterministic() {
    assert_eq!(ashg(&["gen", "random", "--n", "5", "--class", "feg"]).status.code(), Some(2));
    let a = ashg(&["gen", "random", "--n", "5", "--class", "feg", "--seed", "9"]);
    let b = ashg(&["gen", "random", "--n", "5", "--class", "feg", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emitted_game_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = ashg(&["gen", "random", "--n", "6", "--class", "aeg", "--seed", "2", "--asymmetric"]);
    let path = dir.path().join("g.json");
    fs::write(&path, &out.stdout).unwrap();
    let all = ashg(&["enumerate-stable", "--game", s(&path), "--notion", "cis"]);
    assert!(all.status.success(), "{}", String::from_utf8_lossy(&all.stderr));
    let back: ashg::Game = ashg::io::read_json(&path).unwrap();
    assert_eq!(ashg::io::to_json_string(&back) + "\n", String::from_utf8(out.stdout).unwrap());
}

#[test]
fn reduce_full_mode_matches_cover() {
    let dir = TempDir::new().unwrap();
    let cover = write(dir.path(), "c.json", &json!({"variant": "setcover", "E": [1, 2], "sets": [[1], [2], [1, 2]], "k": 1}));
    let out = ashg(&["reduce", "--theorem", "thm43", "--cover", s(&cover), "--notion", "is", "--mode", "full"]);
    let v = stdout_json(&out);
    assert_eq!(v["agree"], json!(true));
    assert_eq!(v["cover_exists"], json!(true));
    assert_eq!(v["provenance"], json!("hub"));
    let gen = stdout_json(&ashg(&["gen", "reduce", "--theorem", "hub", "--cover", s(&cover)]));
    assert_eq!(gen["budget"], json!(2));
    assert_eq!(gen["notion"], json!("ns"));
}

#[test]
fn gadget_side_conditions_exit_two() {
    let dir = TempDir::new().unwrap();
    let cover = write(dir.path(), "c.json", &json!({"variant": "setcover", "E": [1, 2], "sets": [[1], [2]], "k": 2}));
    let out = ashg(&["gen", "reduce", "--theorem", "thm43", "--cover", s(&cover)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k < |E|"));
}

#[test]
fn simulate_writes_report_and_csv() {
    let dir = TempDir::new().unwrap();
    let out = ashg(&["gen", "fig5", "--n", "6"]);
    let b = stdout_json(&out);
    let g = write(dir.path(), "g.json", &b["down"]["game"]);
    let p = write(dir.path(), "p.json", &b["down"]["partition"]);
    let ups = write(dir.path(), "u.json", &json!([b["down"]["update"], b["back"], b["down"]["update"], b["back"]]));
    let csv = dir.path().join("steps.csv");
    let out = ashg(&[
        "simulate", "--game", s(&g), "--partition", s(&p), "--updates", s(&ups), "--policy", "nearest:3", "--notion", "is",
        "--csv", s(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["total_distance"], json!(12));
    assert_eq!(v["average"], json!("3/1"));
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 5);
    assert!(rows.starts_with("step,distance,phi,sw\n1,3,"));
}

#[test]
fn simulate_random_needs_seed() {
    let dir = TempDir::new().unwrap();
    let (g, p, _) = fig3_files(dir.path());
    let out = ashg(&["simulate", "--game", s(&g), "--partition", s(&p), "--random", "3", "--policy", "greedy", "--notion", "cns"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ashg(&[
        "simulate", "--game", s(&g), "--partition", s(&p), "--random", "3", "--seed", "1", "--policy", "greedy", "--notion", "cns",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["per_step"].as_array().unwrap().len(), 3);
}

#[test]
fn table_format_is_plain_text() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &json!([[0, 1], [2]]));
    let out = ashg(&["--format", "table", "distance", "--a", s(&a), "--b", s(&a)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "distance  0\n");
}
