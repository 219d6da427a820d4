use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const D1: &str = "p edp 4 5\ns 1\na 1 2 1\na 2 4 3\na 1 3 3\na 3 4 1\na 2 3 1\n";
const D2: &str = "p edp 4 6\ns 1\na 1 2 1\na 2 4 3\na 1 3 3\na 3 4 1\na 2 3 1\na 3 2 5\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multipath"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn multipath")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn solve_json(input: &Path, extra: &[&str]) -> Value {
    let mut args = vec!["solve", "--input", s(input)];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert!(
        out.status.success(),
        "solve failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn costs(v: &Value) -> Vec<(u64, i64)> {
    v["targets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["t"].as_u64().unwrap(), t["total_cost"].as_i64().unwrap()))
        .collect()
}

#[test]
fn gen_smallest_graph_and_determinism() {
    let dir = TempDir::new().unwrap();
    let out = run(&["gen", "--n", "2", "--p-connected", "1", "--extra-edges", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p edp 2 1");
    assert!(lines[2].starts_with("a 1 2 "));

    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let st = run(&["gen", "--n", "30", "--p-connected", "3", "--extra-edges", "40", "--seed", "7", "--out", s(path)]);
        assert!(st.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn solve_d2_engine() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d2.txt", D2);
    let v = solve_json(&input, &["--p", "2"]);
    assert_eq!(costs(&v), vec![(2, 9), (3, 5), (4, 8)]);
    assert_eq!(v["preserver_kind"], "optimal");
    assert_eq!(v["preserver_edge_ids"].as_array().unwrap().len(), 6);
    assert_eq!(v["targets"][2]["paths"], serde_json::json!([[1, 2, 4], [1, 3, 4]]));
    assert_eq!(v["timing"]["phases"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_d1_is_infeasible_without_flag() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d1.txt", D1);
    let out = run(&["solve", "--input", s(&input), "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotOutconnected(1)"));

    let out = run(&["solve", "--input", s(&input), "--p", "2", "--mode", "ssp-baseline"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_d1_underconnected() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d1.txt", D1);
    let v = solve_json(&input, &["--p", "2", "--allow-underconnected"]);
    let sigma: Vec<u64> = v["targets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["sigma"].as_u64().unwrap())
        .collect();
    assert_eq!(sigma, vec![1, 2, 2]);
    assert_eq!(v["preserver_edge_ids"].as_array().unwrap().len(), 5);
}

#[test]
fn keep_intermediate_reports_every_phase() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d2.txt", D2);
    let v = solve_json(&input, &["--p", "2", "--keep-intermediate"]);
    let phases = v["intermediate"].as_array().unwrap();
    assert_eq!(phases.len(), 2);
    assert_eq!(phases[0]["preserver_edge_ids"], serde_json::json!([0, 3, 4]));
}

#[test]
fn verify_accepts_engine_and_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d2.txt", D2);
    let v = solve_json(&input, &["--p", "2"]);
    let good = write(&dir, "good.json", &v.to_string());
    let out = run(&["verify", "--input", s(&input), "--solution", s(&good)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let mut bad = v.clone();
    bad["targets"][0]["total_cost"] = 8.into();
    let bad_path = write(&dir, "bad.json", &bad.to_string());
    let out = run(&["verify", "--input", s(&input), "--solution", s(&bad_path), "--level", "costs"]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);

    // a cheaper but infeasible edge set for target 2
    let mut swapped = v.clone();
    swapped["targets"][0]["edge_ids"] = serde_json::json!([0, 2, 4]);
    swapped["targets"][0]["total_cost"] = 5.into();
    let path = write(&dir, "swapped.json", &swapped.to_string());
    let out = run(&["verify", "--input", s(&input), "--solution", s(&path)]);
    assert_eq!(out.status.code(), Some(3));

    let mut cut = v;
    cut["preserver_edge_ids"] = serde_json::json!([0, 1, 2, 3, 4]);
    let path = write(&dir, "cut.json", &cut.to_string());
    let out = run(&["verify", "--input", s(&input), "--solution", s(&path)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_baseline_skips_preserver_checks() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d2.txt", D2);
    let v = solve_json(&input, &["--p", "2", "--mode", "ssp-baseline"]);
    assert_eq!(costs(&v), vec![(2, 9), (3, 5), (4, 8)]);
    assert_eq!(v["preserver_kind"], "union-cover");
    let sol = write(&dir, "b.json", &v.to_string());
    let out = run(&["verify", "--input", s(&input), "--solution", s(&sol), "--level", "full"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["notices"][0].as_str().unwrap().contains("preserver checks skipped"));
}

#[test]
fn generated_instances_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    for seed in 0..4 {
        let graph = dir.path().join(format!("g{seed}.txt"));
        let seed_arg = seed.to_string();
        let st = run(&[
            "gen", "--n", "30", "--p-connected", "3", "--extra-edges", "60", "--max-cost", "20", "--seed", &seed_arg,
            "--out", s(&graph),
        ]);
        assert!(st.status.success());
        for extra in [
            &["--p", "3", "--threads", "2"][..],
            &["--p", "4", "--allow-underconnected"],
            &["--p", "2", "--vertex-disjoint", "--allow-underconnected"],
            &["--p", "3", "--mode", "ssp-baseline"],
        ] {
            let v = solve_json(&graph, extra);
            let sol = write(&dir, "sol.json", &v.to_string());
            let out = run(&["verify", "--input", s(&graph), "--solution", s(&sol)]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "seed {seed} {extra:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = run(&[
        "bench", "--n-list", "20,40", "--p", "2", "--density", "sparse", "--reps", "1", "--out", s(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,m,p,engine_ms,baseline_ms,ratio");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("20,"));
    assert_eq!(lines[2].split(',').count(), 6);
}

#[test]
fn usage_and_io_errors_exit_one() {
    assert_eq!(run(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--input", "/nonexistent/g.txt", "--p", "2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let dir = TempDir::new().unwrap();
    let input = write(&dir, "neg.txt", "p edp 2 1\ns 1\na 1 2 -3\n");
    let out = run(&["solve", "--input", s(&input), "--p", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
