//! End-to-end checks of the command-line interface: output formats, the
//! documented exit codes (0 success, 2 config error, 3 capacity error),
//! and byte-identical experiment reruns.

use std::path::Path;
use std::process::{Command, Output};

fn gapslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_prints_sequence() {
    let out = gapslab(&["gen", "--seq", "squares", "--n-max", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n4\n9\n16\n");
}

#[test]
fn gen_output_roundtrips_through_file_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("primes.txt");
    let out = gapslab(&[
        "gen",
        "--seq",
        "primes",
        "--n-max",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let spec = format!("file:{}", path.display());
    let out = gapslab(&["gen", "--seq", &spec, "--n-max", "20"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("2\n3\n5\n"));
}

#[test]
fn invalid_sequence_spec_exits_2() {
    let out = gapslab(&["gen", "--seq", "fibonacci", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gapslab(&["gen", "--seq", "ps:2/3", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_error_exits_3() {
    let out = gapslab(&["diffstats", "--seq", "squares", "--n-max", "20000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn diffstats_csv_shape() {
    let out = gapslab(&["diffstats", "--seq", "primes", "--n-max", "64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,c_plus,c_full,energy,ratio_e_lower,ratio_e_upper,c_over_nlogn"
    );
    // Checkpoints 2, 4, 8, 16, 32, 64.
    assert_eq!(lines.count(), 6);
    // N=2 row for primes {2,3}: C+=1, C=3, E=6.
    assert!(text.lines().nth(1).unwrap().starts_with("2,1,3,6,"));
}

#[test]
fn gaps_csv_has_envelope_columns() {
    let out = gapslab(&[
        "gaps", "--seq", "squares", "--n-max", "64", "--seed", "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("n,delta,delta_times_cn,th1_lower(eps=1)"));
    assert!(header.contains("th1_upper_plain"));
    assert_eq!(text.lines().count(), 64); // header + N = 2..=64
}

#[test]
fn billiard_csv_shape() {
    let out = gapslab(&["billiard", "--alpha", "1.5", "--n-max", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text
        .lines()
        .next()
        .unwrap()
        .starts_with("n,delta,up_envelope,low_envelope,hit_up,exceed_low"));
    // delta(4) = 0.5 for alpha = 3/2.
    assert!(text.lines().nth(4).unwrap().starts_with("4,0.5,"));
}

#[test]
fn series_json_fields() {
    let out = gapslab(&[
        "series", "--family", "occurrence", "--seq", "squares", "--n-max", "200", "--k-max", "100",
        "--b-max", "10", "--decay", "power:3",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k_max"], 100);
    assert_eq!(v["b_max"], 10);
    assert_eq!(v["l_max"], 200);
    assert!(v["partial_sum"].as_f64().unwrap() > 0.0);
    assert!(v["series"].as_str().unwrap().contains("occurrence"));

    let out = gapslab(&["series", "--family", "catlin", "--decay", "power:2", "--k-max", "50", "--b-max", "10"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["l_max"], serde_json::Value::Null);
}

#[test]
fn multtable_csv_shape() {
    let out = gapslab(&["multtable", "--n-max", "16"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "n,count,ford_ratio");
    // N=2: {1,2,4} -> 3; N=4: {1..4,6,8,9,12,16} -> 9.
    assert!(text.lines().nth(1).unwrap().starts_with("2,3,"));
    assert!(text.lines().nth(2).unwrap().starts_with("4,9,"));
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("cfg.json");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn experiment_runs_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "kind": "gaps",
            "sequence": {"kind": "squares"},
            "n_max": 256,
            "alpha_trials": 5,
            "master_seed": 9,
            "dyadic_window_max": 7,
            "n_lower_threshold": 64
        }"#,
    );
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = gapslab(&[
            "experiment",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let json_a = std::fs::read(out_a.join("report.json")).unwrap();
    let json_b = std::fs::read(out_b.join("report.json")).unwrap();
    assert_eq!(json_a, json_b);
    let csv_a = std::fs::read(out_a.join("alpha_summary.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("alpha_summary.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    let report: serde_json::Value = serde_json::from_slice(&json_a).unwrap();
    assert_eq!(report["alpha_trials"], 5);
    assert_eq!(report["alphas"].as_array().unwrap().len(), 5);
}

#[test]
fn experiment_report_kind_emits_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            r#"{{
                "kind": "report",
                "sequence": {{"kind": "squares"}},
                "n_max": 64,
                "series_k_max": 50,
                "series_b_max": 5,
                "out_dir": "{}"
            }}"#,
            dir.path().join("rep").display()
        ),
    );
    let out = gapslab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rep = dir.path().join("rep");
    assert!(rep.join("diffstats_trajectory.csv").exists());
    assert!(rep.join("multtable.csv").exists());
    let series: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(rep.join("series.json")).unwrap()).unwrap();
    assert_eq!(series.as_array().unwrap().len(), 2);
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"kind": "gaps", "sequence": {"kind": "squares"}, "n_max": 100, "botched": true}"#,
    );
    let out = gapslab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = write_config(dir.path(), "not json");
    let out = gapslab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_sequence_file_fails_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    let spec = format!("file:{}", path.display());
    let out = gapslab(&["gen", "--seq", &spec, "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
