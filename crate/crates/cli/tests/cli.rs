use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lqw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lqw"))
        .current_dir(dir)
        .env_remove("LQW_OUT_DIR")
        .args(args)
        .output()
        .expect("failed to run lqw")
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn json(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&read(path)).unwrap()
}

#[test]
fn walk1d_zero_steps() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(dir.path(), &["walk1d", "--steps", "0", "--out", "w.csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path().join("w.csv")), "n,probability\n0,1.0\n");
    let m = json(dir.path().join("w.csv.manifest.json"));
    assert_eq!(m["subcommand"], "walk1d");
    assert_eq!(m["config"]["steps"], 0);
    assert_eq!(m["outputs"][0], "w.csv");
}

#[test]
fn walk1d_three_steps() {
    let dir = tempfile::tempdir().unwrap();
    lqw(dir.path(), &["walk1d", "--steps", "3", "--out", "w.csv"]);
    let rows = csv_rows(&read(dir.path().join("w.csv")));
    let expect = [(-3, 0.125), (-1, 0.125), (1, 0.625), (3, 0.125)];
    assert_eq!(rows.len(), 4);
    for (row, (n, p)) in rows.iter().zip(expect) {
        assert_eq!(row[0].parse::<i64>().unwrap(), n);
        assert!((row[1].parse::<f64>().unwrap() - p).abs() < 1e-12);
    }
}

#[test]
fn walk1d_symmetric_csv_is_mirrored() {
    let dir = tempfile::tempdir().unwrap();
    lqw(
        dir.path(),
        &["walk1d", "--init", "symmetric", "--out", "w.csv"],
    );
    let rows = csv_rows(&read(dir.path().join("w.csv")));
    let probs: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    let mut reversed = probs.clone();
    reversed.reverse();
    assert_eq!(probs, reversed);
}

#[test]
fn walknd_writes_grid_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(
        dir.path(),
        &["walknd", "--dims", "3", "--steps", "1", "--out", "g.csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = read(dir.path().join("g.csv"));
    assert!(text.starts_with("x1,x2,x3,probability\n"));
    assert_eq!(csv_rows(&text).len(), 8);
}

#[test]
fn walkc_toy_and_smallest_published_case() {
    let dir = tempfile::tempdir().unwrap();
    lqw(
        dir.path(),
        &[
            "walkc", "--n", "8", "--k", "2", "--steps", "3", "--out", "toy.csv",
        ],
    );
    let rows = csv_rows(&read(dir.path().join("toy.csv")));
    assert_eq!(rows.len(), 4);
    assert!((rows[3][1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);

    lqw(
        dir.path(),
        &["walkc", "--n", "512", "--k", "12", "--out", "t.csv"],
    );
    let rows = csv_rows(&read(dir.path().join("t.csv")));
    assert_eq!(rows.last().unwrap()[0], "11");
    let p_aa: f64 = rows[11][1].parse().unwrap();
    assert!((p_aa - 0.9548).abs() <= 0.02);
}

#[test]
fn walkc_rejects_k_equal_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(dir.path(), &["walkc", "--n", "8", "--k", "8"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["train", "--delta-p", "0"][..],
        &["train", "--delta-p", "-0.5"],
        &["train", "--z", "1"],
        &["train", "--no-such-flag"],
        &["backprop", "--lr", "0"],
        &["frobnicate"],
    ] {
        let out = lqw(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn exhausted_shift_budget_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(
        dir.path(),
        &[
            "train",
            "--origin",
            "101,101,101,101,101,101,101,101,101",
            "--max-window-shifts",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no solution"));
}

#[test]
fn dry_run_reports_steps_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(
        dir.path(),
        &["train", "--dry-run", "--origin", "-4,-4,2,-2,0,-2,-2,2,0"],
    );
    assert_eq!(out.status.code(), Some(0));
    let plan: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(plan["k"], 12);
    assert_eq!(plan["n"], 512);
    assert_eq!(plan["t_int"], 11);
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn train_writes_result_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(dir.path(), &["train", "--seed", "3", "--out", "r.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(dir.path().join("r.json"));
    if matches!(r["outcome"].as_str(), Some("AA" | "AB")) {
        assert_eq!(r["classification_error"], 0);
    }
    let weights = r["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 9);
    for w in weights {
        assert_eq!((w.as_f64().unwrap() / 0.5).fract(), 0.0);
    }
    let t3 = read(dir.path().join("r_steps.csv"));
    assert!(t3.starts_with("experiment,k,N,t_theoretical,t_simulated\n1,"));
    let t4 = read(dir.path().join("r_probabilities.csv"));
    assert!(t4.starts_with("experiment,p_AA,p_AB,p_BA,p_BB\n1,"));
    let m = json(dir.path().join("r.json.manifest.json"));
    assert_eq!(m["seed"], 3);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"seed": 7, "count_noise": 0, "rounding": "floor", "origin": [-4,-4,2,-2,0,-2,-2,2,0]}"#,
    )
    .unwrap();
    let out = lqw(
        dir.path(),
        &[
            "train", "--config", "cfg.json", "--seed", "9", "--out", "r.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let m = json(dir.path().join("r.json.manifest.json"));
    assert_eq!(m["seed"], 9);
    assert_eq!(m["config"]["rounding"], "floor");
    assert_eq!(m["config"]["delta_p"], 0.5);
    let r = json(dir.path().join("r.json"));
    assert_eq!(r["t_int"], 10);
    assert_eq!(r["k"], 12);

    fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let out = lqw(dir.path(), &["train", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lqw"))
        .current_dir(dir.path())
        .env("LQW_OUT_DIR", "from-env")
        .args(["walk1d", "--steps", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("from-env/walk1d.csv").exists());
    assert!(dir
        .path()
        .join("from-env/walk1d.csv.manifest.json")
        .exists());
}

#[test]
fn backprop_without_runs_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(dir.path(), &["backprop", "--runs", "0", "--out", "b.csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        read(dir.path().join("b.csv")),
        "lr,seed,outcome,epochs,final_mse\n"
    );
}

#[test]
fn backprop_summary_uses_sample_deviation() {
    let dir = tempfile::tempdir().unwrap();
    lqw(dir.path(), &["backprop", "--runs", "10", "--out", "b.csv"]);
    let epochs: Vec<f64> = csv_rows(&read(dir.path().join("b.csv")))
        .iter()
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(epochs.len(), 10);
    let mean = epochs.iter().sum::<f64>() / 10.0;
    let var = epochs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 9.0;
    let summary = csv_rows(&read(dir.path().join("b_summary.csv")));
    let std: f64 = summary[0][8].parse().unwrap();
    assert!((std - var.sqrt()).abs() < 1e-9 * var.sqrt().max(1.0));
    assert_eq!(summary[0][1], "10");
}

#[test]
fn runs_are_bit_reproducible_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    lqw(dir.path(), &["train", "--runs", "6", "--out", "a/r.json"]);
    lqw(
        dir.path(),
        &["--jobs", "3", "train", "--runs", "6", "--out", "b/r.json"],
    );
    for f in ["r.json", "r_steps.csv", "r_probabilities.csv", "r_runs.csv"] {
        assert_eq!(
            read(dir.path().join("a").join(f)),
            read(dir.path().join("b").join(f)),
            "{f}"
        );
    }
}

#[test]
fn reproduce_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqw(
        dir.path(),
        &[
            "--out-dir",
            "rep",
            "reproduce",
            "--train-runs",
            "40",
            "--backprop-runs",
            "5",
        ],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    let report = read(dir.path().join("rep/report.md"));
    assert!(report.contains("195.06") && report.contains("195.83"));
    assert!(report.contains("known discrepancy"));
    for n in 1..=8 {
        assert!(stdout.contains(&format!("PASS {n} ")), "criterion {n}");
    }
    assert_eq!(
        read(dir.path().join("rep/step_counts.csv")).lines().next(),
        Some("experiment,k,N,t_theoretical,t_simulated")
    );
    let m = json(dir.path().join("rep/manifest.json"));
    assert!(m["outputs"].as_array().unwrap().len() > 10);
}
