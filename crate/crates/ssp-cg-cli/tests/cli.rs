//! End-to-end runs of the `ssp-cg` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssp-cg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no `{key}` line in:\n{text}")).trim()
}

#[test]
fn solve_fig9_reports_value_and_decreases() {
    let o = run(&["solve", "--gen", "fig9", "--solver", "cgilao", "--expansion", "tied"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let v: f64 = field(&out, "V(s0) =").parse().unwrap();
    assert!((v - 4.0).abs() < 1e-9);
    let d: u64 = field(&out, "value_decrease_events:").parse().unwrap();
    assert!(d >= 1);
}

#[test]
fn solve_gridworld_with_vi() {
    let o = run(&["solve", "--gen", "gridworld", "--solver", "vi", "--epsilon", "1e-9"]);
    assert!(o.status.success());
    let v: f64 = field(&stdout(&o), "V(s0) =").parse().unwrap();
    assert!((v - 6.0).abs() < 1e-6);
}

#[test]
fn solve_writes_lp_partial_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("fig7.lp");
    let dump = dir.path().join("fig7.txt");
    let csv = dir.path().join("runs.csv");
    for _ in 0..2 {
        let o = run(&[
            "solve",
            "--gen",
            "fig7",
            "--penalty",
            "0",
            "--export-lp",
            lp.to_str().unwrap(),
            "--dump-partial",
            dump.to_str().unwrap(),
            "--stats-out",
            csv.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let lp_text = std::fs::read_to_string(&lp).unwrap();
    assert!(lp_text.contains("Maximize") && lp_text.trim_end().ends_with("End"));
    assert!(!std::fs::read_to_string(&dump).unwrap().is_empty());
    let rows = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<_> = rows.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], ssp_cg::bench::CSV_HEADER);
    assert!(lines[1].starts_with("fig7,cgilao,tied,table,false,0,solved,"));
}

#[test]
fn solve_reads_json_problem() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    ssp_cg::io::save_json(&ssp_cg::domains::figures::fig10(), &path).unwrap();
    let o = run(&["solve", "--problem", path.to_str().unwrap(), "--penalty", "0"]);
    assert!(o.status.success());
    let v: f64 = field(&stdout(&o), "V(s0) =").parse().unwrap();
    assert!((v - 9.0).abs() < 1e-9);
}

#[test]
fn compare_prints_csv_and_agrees() {
    let o = run(&[
        "compare",
        "--gen",
        "fig7",
        "--gen",
        "random:n=20,seed=5",
        "--solver",
        "vi,ilao,cgilao",
        "--expansion",
        "tied,single,trial",
        "--seed",
        "1,2",
        "--elim",
        "both",
        "--epsilon",
        "1e-6",
        "--threads",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(ssp_cg::bench::CSV_HEADER));
    assert!(lines.all(|l| l.contains(",solved,")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("agree"));
}

#[test]
fn compare_without_problems_prints_header_only() {
    let o = run(&["compare"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), format!("{}\n", ssp_cg::bench::CSV_HEADER));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["solve", "--gen", "fig7", "--solver", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--gen", "fig7", "--heuristic", "table", "--solver", "ilao", "--epsilon", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--problem", "/nonexistent/problem.json"]).status.code(), Some(3));
    let timed_out = run(&["solve", "--gen", "random:n=2000,seed=1", "--solver", "vi", "--epsilon", "1e-12", "--timeout-secs", "0.000001"]);
    assert_eq!(timed_out.status.code(), Some(4));
    assert_eq!(run(&["solve", "--gen", "fig7", "--solver", "vi", "--max-iterations", "1", "--epsilon", "1e-12"]).status.code(), Some(4));
}
