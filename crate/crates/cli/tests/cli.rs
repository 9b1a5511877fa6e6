use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").canonicalize().unwrap()
}

fn omega(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_omega-imc"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

/// Copies a fixture config into `dir` with absolute file references and the
/// given edits applied.
fn config_with(dir: &Path, fixture: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(fixtures().join(fixture)).unwrap()).unwrap();
    let dra = fixtures().join(v["spec"]["dra"].as_str().unwrap());
    v["spec"]["dra"] = json!(dra);
    if let Some(imc) = v.get("imc").and_then(Value::as_str) {
        v["imc"] = json!(fixtures().join(imc));
    }
    edit(&mut v);
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn trivial_spec_is_all_green() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = fixtures().join("trivial.json");
    let (code, err) = omega(&["verify", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = read(&out.join("results.csv"));
    assert_eq!(csv.lines().count(), 2);
    assert!(column(&csv, "class").iter().all(|c| c == "yes"));
    let svg = read(&out.join("partition.svg"));
    assert!(svg.contains("#2ca02c") && !svg.contains("#d62728") && !svg.contains("#ffd700"));
    let summary: Value = serde_json::from_str(&read(&out.join("summary.json"))).unwrap();
    assert_eq!(summary["uncertain_volume"], json!(0.0));
}

#[test]
fn csv_has_one_row_per_cell() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = fixtures().join("bistable_phi1.json");
    let (code, err) = omega(&["verify", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let summary: Value = serde_json::from_str(&read(&out.join("summary.json"))).unwrap();
    let csv = read(&out.join("results.csv"));
    assert_eq!(csv.lines().count() as u64 - 1, summary["states"].as_u64().unwrap());
    assert!(csv.starts_with("cell_id,lo_0,hi_0,lo_1,hi_1,p_min,p_max,class\n"));
}

#[test]
fn point_valued_imc_skips_abstraction() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = fixtures().join("point_imc_config.json");
    let (code, err) = omega(&["verify", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = read(&out.join("results.csv"));
    assert_eq!(csv, "cell_id,p_min,p_max,class\n0,1,1,yes\n1,1,1,yes\n2,1,1,yes\n");
    assert!(!out.join("partition.svg").exists());
}

#[test]
fn exported_abstraction_reproduces_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = fixtures().join("bistable_phi1.json");
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    assert_eq!(omega(&["abstract", "--config", cfg.to_str().unwrap(), "--out-dir", a.to_str().unwrap()]).0, 0);
    assert_eq!(omega(&["verify", "--config", cfg.to_str().unwrap(), "--out-dir", b.to_str().unwrap()]).0, 0);
    let imc = a.join("imc.json");
    let (code, err) = omega(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--imc",
        imc.to_str().unwrap(),
        "--out-dir",
        c.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let (direct, via_file) = (read(&b.join("results.csv")), read(&c.join("results.csv")));
    for col in ["p_min", "p_max", "class"] {
        assert_eq!(column(&direct, col), column(&via_file, col), "{col}");
    }
    assert_eq!(read(&a.join("cells.csv")).lines().count(), direct.lines().count());
}

#[test]
fn generous_stop_exits_after_round_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_with(tmp.path(), "bistable_phi1.json", |v| v["refinement"]["v_stop"] = json!(1.0));
    let out = tmp.path().join("out");
    let (code, err) = omega(&["refine", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.join("round_000.csv").exists() && out.join("round_000.svg").exists());
    assert!(!out.join("round_001.csv").exists());
    let summary: Value = serde_json::from_str(&read(&out.join("summary.json"))).unwrap();
    assert_eq!(summary["status"], "converged");
    assert_eq!(read(&out.join("progress.log")).lines().count(), 1);
}

#[test]
fn exhausted_budget_exits_four() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_with(tmp.path(), "bistable_phi1.json", |v| {
        v["refinement"]["v_stop"] = json!(0.0);
        v["refinement"]["max_rounds"] = json!(0);
    });
    let out = tmp.path().join("out");
    let (code, err) = omega(&["refine", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 4, "{err}");
    let summary: Value = serde_json::from_str(&read(&out.join("summary.json"))).unwrap();
    assert_eq!(summary["status"], "max_rounds");
    assert!(out.join("round_000.csv").exists() && !out.join("round_001.csv").exists());
}

#[test]
fn full_refinement_writes_every_round() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = fixtures().join("bistable_phi1.json");
    let (code, err) = omega(&["refine", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let log = read(&out.join("progress.log"));
    let rounds = log.lines().count();
    assert!(rounds > 1);
    for k in 0..rounds {
        assert!(out.join(format!("round_{k:03}.csv")).exists());
    }
    let last = log.lines().last().unwrap();
    let v: f64 = last
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("uncertain_volume="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(v <= 0.35);
}

#[test]
fn config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = out.to_str().unwrap();
    assert_eq!(omega(&["verify", "--out-dir", o]).0, 2);
    let missing = tmp.path().join("nope.json");
    assert_eq!(omega(&["verify", "--config", missing.to_str().unwrap(), "--out-dir", o]).0, 2);
    let unknown = config_with(tmp.path(), "trivial.json", |v| v["surprise"] = json!(1));
    assert_eq!(omega(&["verify", "--config", unknown.to_str().unwrap(), "--out-dir", o]).0, 2);
    let bad_p = config_with(tmp.path(), "trivial.json", |v| v["spec"]["p_sat"] = json!(1.5));
    assert_eq!(omega(&["verify", "--config", bad_p.to_str().unwrap(), "--out-dir", o]).0, 2);
    let bad_scorer = config_with(tmp.path(), "trivial.json", |v| v["refinement"] = json!({"scorer": "nope"}));
    assert_eq!(omega(&["refine", "--config", bad_scorer.to_str().unwrap(), "--out-dir", o]).0, 2);
    let bad_dra = config_with(tmp.path(), "trivial.json", |v| v["spec"]["dra"] = json!("/nonexistent.hoa"));
    assert_eq!(omega(&["verify", "--config", bad_dra.to_str().unwrap(), "--out-dir", o]).0, 2);
}

#[test]
fn unconverged_solver_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let imc = tmp.path().join("loop.json");
    let entries = "[[0, 1, 0.5, 0.5], [0, 2, 0.25, 0.25], [0, 3, 0.25, 0.25], [1, 0, 1, 1], [2, 2, 1, 1], [3, 3, 1, 1]]";
    let text = format!("{{\"n_states\": 4, \"props\": [[], [], [\"A\"], []], \"entries\": {entries}}}");
    std::fs::write(&imc, text).unwrap();
    let cfg = config_with(tmp.path(), "point_imc_config.json", |v| {
        v["imc"] = json!(imc);
        v["numerics"] = json!({"tol": 1e-12, "max_iters": 2});
    });
    let out = tmp.path().join("out");
    let (code, err) = omega(&["verify", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
    let relaxed = config_with(tmp.path(), "point_imc_config.json", |v| v["imc"] = json!(imc));
    let (code, err) = omega(&["verify", "--config", relaxed.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = read(&out.join("results.csv"));
    let p: f64 = column(&csv, "p_min")[0].parse().unwrap();
    assert!((p - 0.5).abs() < 1e-9, "{p}");
}

#[test]
fn simulate_writes_trajectories() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = fixtures().join("bistable_phi1.json");
    let c = cfg.to_str().unwrap();
    let o = out.to_str().unwrap();
    let args = ["simulate", "--config", c, "--out-dir", o, "--x0", "3,2", "--horizon", "10", "--n-traj", "3"];
    assert_eq!(omega(&args).0, 0);
    let csv = read(&out.join("trajectories.csv"));
    assert_eq!(csv.lines().count(), 1 + 3 * 11);
    assert!(csv.starts_with("traj,step,x_0,x_1\n0,0,3,2\n"));
    for line in csv.lines().skip(1) {
        for v in line.split(',').skip(2) {
            let x: f64 = v.parse().unwrap();
            assert!((0.0..=4.0).contains(&x));
        }
    }
    let outside = ["simulate", "--config", c, "--out-dir", o, "--x0", "5,2"];
    assert_eq!(omega(&outside).0, 2);
}
