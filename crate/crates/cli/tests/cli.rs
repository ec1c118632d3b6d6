use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn saba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saba")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PARAMS: &str = r#"{
    "load_capacity_fruits": 300, "empty_weight_kg": 30.0, "fruit_weight_kg": 0.3,
    "pick_time_s": 7.0, "speed_mps": 1.0, "gravity": 9.81, "rolling_mu": 0.05,
    "efficiency": 0.8, "battery_kJ": 432.0, "swap_threshold_kJ": 86.4,
    "swap_time_s": 150.0, "pick_energy_kJ": 0.3
}"#;

fn worked(dir: &Path) -> (PathBuf, PathBuf) {
    let inst = dir.join("worked.json");
    std::fs::write(
        &inst,
        format!(
            r#"{{"name": "worked", "params": {PARAMS}, "robot_count": 1,
            "tasks": [{{"id": 2, "yield": 20, "row": null, "pos": null}}, {{"id": 3, "yield": 30, "row": null, "pos": null}}],
            "distances": [[0, 10, 12], [10, 0, 5], [12, 5, 0]]}}"#
        ),
    )
    .unwrap();
    let sol = dir.join("sol.json");
    std::fs::write(
        &sol,
        r#"{"routes": [[2, 3]], "splits": [
            {"robot": 0, "cycle": 0, "task": 2, "count": 20},
            {"robot": 0, "cycle": 0, "task": 3, "count": 30}]}"#,
    )
    .unwrap();
    (inst, sol)
}

#[test]
fn evaluate_prints_the_worked_example() {
    let d = scratch("worked");
    let (inst, sol) = worked(&d);
    let o = saba(&["evaluate", s(&inst), s(&sol)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("makespan_s 377\n"));
    let e: f64 = text.lines().find_map(|l| l.strip_prefix("transport_energy_kJ ")).unwrap().parse().unwrap();
    assert!((e - 0.62539).abs() < 1e-5);

    let o = saba(&["--format", "json", "evaluate", s(&inst), s(&sol)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["makespan_s"], 377.0);
}

#[test]
fn unjustified_swap_is_infeasible() {
    let d = scratch("swap");
    let (inst, _) = worked(&d);
    let sol = d.join("swap.json");
    std::fs::write(
        &sol,
        r#"{"routes": [[2, -1, 3]], "splits": [
            {"robot": 0, "cycle": 0, "task": 2, "count": 20},
            {"robot": 0, "cycle": 1, "task": 3, "count": 30}]}"#,
    )
    .unwrap();
    let o = saba(&["evaluate", s(&inst), s(&sol)]);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("feasible false"));
    assert!(text.contains("violation"), "{text}");
}

#[test]
fn exit_codes() {
    let d = scratch("codes");
    let (inst, sol) = worked(&d);
    assert_eq!(code(&saba(&["--help"])), 0);
    assert_eq!(code(&saba(&["solve"])), 3);
    assert_eq!(code(&saba(&["frobnicate"])), 3);
    assert_eq!(code(&saba(&["--out", s(&d), "solve", s(&inst), "--pop", "1"])), 3);
    assert_eq!(code(&saba(&["--out", s(&d), "solve", s(&inst), "--runs", "0"])), 3);
    assert_eq!(code(&saba(&["evaluate", s(&d.join("missing.json")), s(&sol)])), 4);
    let bad = d.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&saba(&["evaluate", s(&bad), s(&sol)])), 4);
    assert_eq!(code(&saba(&["evaluate", s(&inst), s(&bad)])), 4);
}

#[test]
fn generate_solve_evaluate_round_trip() {
    let d = scratch("round");
    let o = saba(&[
        "--out", s(&d), "--seed", "3", "generate", "--rows", "3", "--cols", "4", "--tasks", "6", "--robots", "2", "--name", "g6",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let inst = d.join("g6.json");
    assert!(inst.exists());

    let o = saba(&["--out", s(&d), "solve", s(&inst), "--runs", "2", "--budget", "0.2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let run = d.join("g6/run_00");
    for f in ["front.csv", "run_log.csv", "run_config.json", "knee.json", "knee_gantt.csv", "knee_gantt.svg", "pareto.svg"] {
        assert!(run.join(f).exists(), "{f}");
    }
    assert!(d.join("g6/summary.csv").exists());

    // every front row re-evaluates to exactly its listed objectives
    let front = std::fs::read_to_string(run.join("front.csv")).unwrap();
    for line in front.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let o = saba(&["--format", "json", "evaluate", s(&inst), s(&run.join(f[2]))]);
        assert_eq!(code(&o), 0);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["makespan_s"].as_f64().unwrap(), f[0].parse::<f64>().unwrap());
        assert_eq!(v["transport_energy_kJ"].as_f64().unwrap(), f[1].parse::<f64>().unwrap());
    }
    let knee = saba(&["evaluate", s(&inst), s(&run.join("knee.json"))]);
    assert_eq!(code(&knee), 0);
}

#[test]
fn json_format_and_compare() {
    let d = scratch("compare");
    let inst = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances/tiny/tiny-4a.json");
    let full = d.join("full");
    let v3 = d.join("v3");
    assert_eq!(code(&saba(&["--out", s(&full), "--format", "json", "solve", s(&inst), "--runs", "3", "--budget", "0.2"])), 0);
    assert_eq!(code(&saba(&["--out", s(&v3), "solve", s(&inst), "--runs", "3", "--budget", "0.2", "--no-sabm", "--no-psrm"])), 0);
    assert!(full.join("tiny-4a/run_00/front.json").exists());

    let out = d.join("cmp");
    let a = format!("SABA={}", s(&full));
    let b = format!("V3={}", s(&v3));
    let o = saba(&["--out", s(&out), "compare", &a, &b]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["metrics.csv", "summary.csv", "wins.csv", "ranks.csv", "wins.svg"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);

    assert_eq!(code(&saba(&["--out", s(&out), "compare", &a, &a])), 3);
    let empty = scratch("compare-empty");
    assert_eq!(code(&saba(&["--out", s(&out), "compare", &a, s(&empty)])), 3);
}

#[test]
fn solve_is_reproducible() {
    let d = scratch("repro");
    let inst = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances/tiny/tiny-5b.json");
    for k in ["a", "b"] {
        assert_eq!(code(&saba(&["--out", s(&d.join(k)), "--seed", "42", "solve", s(&inst), "--runs", "2", "--budget", "0.3"])), 0);
    }
    for run in ["run_00", "run_01"] {
        let read = |k: &str| std::fs::read(d.join(k).join("tiny-5b").join(run).join("front.csv")).unwrap();
        assert_eq!(read("a"), read("b"));
    }
}
