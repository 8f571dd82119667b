//! End-to-end tests against the spawned binary: exit-code contract, output
//! formats, configuration plumbing and checkpoint resume.

use std::process::{Command, Output};

use sqsf::VerifyReport;

fn sqsf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sqsf"))
}

fn run(args: &[&str]) -> Output {
    sqsf().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn positivity_small_range_exits_zero() {
    let out = run(&["positivity", "--max", "100", "--checkpoint", "none"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn positivity_json_report_parses() {
    let out = run(&[
        "--format",
        "json",
        "positivity",
        "--max",
        "5000",
        "--checkpoint",
        "none",
        "--workers",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: VerifyReport = serde_json::from_str(&stdout(&out)).expect("valid report json");
    assert!(report.passed());
    assert_eq!(report.range, (1, 5000));
    assert_eq!(report.schema_version, 1);
}

#[test]
fn positivity_csv_has_summary_row() {
    let out = run(&["--format", "csv", "positivity", "--max", "500", "--checkpoint", "none"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("record,campaign"));
    assert!(lines.next().unwrap().starts_with("summary,positivity,1,500,true"));
}

#[test]
fn resume_is_idempotent_and_cached_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("positivity.log");
    let ckpt_s = ckpt.to_str().unwrap();

    let out = run(&["positivity", "--max", "20000", "--checkpoint", ckpt_s]);
    assert_eq!(out.status.code(), Some(0));
    let first_log = std::fs::read_to_string(&ckpt).unwrap();
    assert!(first_log.lines().count() >= 1);

    // second run resumes from full coverage and recomputes nothing
    let out = run(&["positivity", "--max", "20000", "--resume", "--checkpoint", ckpt_s]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cached=full"));
    assert_eq!(std::fs::read_to_string(&ckpt).unwrap(), first_log);

    // a checkpoint that records a failure is reported as one (exit 1)
    let bad = dir.path().join("bad.log");
    std::fs::write(&bad, "1 10000 ok\n10001 20000 fail\n").unwrap();
    let out = run(&[
        "positivity",
        "--max",
        "20000",
        "--resume",
        "--checkpoint",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn corrupted_checkpoint_is_truncated_and_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("corrupt.log");
    std::fs::write(&ckpt, "1 8000 ok\n8001 nine thousand ok\n").unwrap();
    let out = run(&[
        "positivity",
        "--max",
        "16000",
        "--resume",
        "--checkpoint",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let entries = std::fs::read_to_string(&ckpt).unwrap();
    assert!(!entries.contains("nine"));
    // coverage is complete and disjoint after the repair
    let mut ranges: Vec<(u64, u64)> = entries
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
        })
        .collect();
    ranges.sort_unstable();
    assert_eq!(ranges.first().unwrap().0, 1);
    assert_eq!(ranges.last().unwrap().1, 16000);
    for w in ranges.windows(2) {
        assert!(w[0].1 < w[1].0);
    }
}

#[test]
fn rcount_exact_and_log_modes() {
    let out = run(&["rcount", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("r(2) = 2"));

    let out = run(&["rcount", "4", "--star"]);
    assert!(stdout(&out).contains("r*(4) = 1"));

    // huge n without --main-term is a usage error
    let out = run(&["rcount", "10^440"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["rcount", "10^440", "--main-term", "--cutoff", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("main term lower bound"));
    assert!(text.contains("e218"));
}

#[test]
fn tau_subcommand_paths() {
    let out = run(&["tau", "--scan", "1320", "--simple"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["tau", "--n", "720720", "--delta", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("holds"));

    let out = run(&["tau", "--scan", "100000", "--ratio"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("max normalized ratio"));

    let out = run(&["--format", "json", "tau", "--scan", "50000", "--delta", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let report: VerifyReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.passed());
    assert_eq!(report.campaign, "tau_h_bound");

    // missing mode flags are usage errors
    let out = run(&["tau", "--scan", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["tau"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constants_confirm_published_values() {
    let out = run(&["constants", "--cutoff", "300000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("kappa_lower"));
    assert!(text.contains("confirmed"));
    // the published 5-decimal prime-square sum is flagged, not failed
    assert!(text.contains("flagged"));
}

#[test]
fn casework_command_reports_thresholds() {
    let out = run(&["casework", "--max", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("thresholds"));
    assert!(text.contains("1375077"));
}

#[test]
fn config_file_and_env_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sqsf.conf");
    std::fs::write(&cfg, "output_format = json\nworker_count = 1\n").unwrap();

    let out = run(&["--config", cfg.to_str().unwrap(), "positivity", "--max", "300", "--checkpoint", "none"]);
    assert_eq!(out.status.code(), Some(0));
    let report: VerifyReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.config_snapshot.contains("worker_count=1"));

    let out = sqsf()
        .env("SQSF_CONFIG", cfg.to_str().unwrap())
        .args(["positivity", "--max", "300", "--checkpoint", "none"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: VerifyReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.passed());

    // a bad config is a configuration error
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "worker_count = many\n").unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "positivity", "--max", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_problems_exit_two() {
    // r_count sieves [0, n]; a huge exact n exceeds the segment cap
    let out = run(&["rcount", "18000000000000000000"]);
    assert_eq!(out.status.code(), Some(2));
}
