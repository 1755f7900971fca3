//! The comparison harness, its CSV output and the density metric.

mod common;

use std::time::Duration;

use common::*;
use ssp_cg::bench::{compare, run_cell, summarize, write_csv, CompareMatrix, RunSpec, RunStatus, CSV_HEADER, CSV_SCHEMA_VERSION};
use ssp_cg::domains::figures::{fig7, fig9};
use ssp_cg::domains::random::{gen_random, RandomSspParams};
use ssp_cg::heuristics::{Heuristic, HeuristicKind};
use ssp_cg::metrics::density_auc;
use ssp_cg::model::apply_fixed_penalty;
use ssp_cg::solvers::{cgilao_solve, ilao_solve, Expansion, SolverConfig, SolverKind};

fn matrix() -> CompareMatrix {
    CompareMatrix {
        solvers: vec![SolverKind::Vi, SolverKind::Ilao, SolverKind::CgIlao],
        expansions: vec![Expansion::Tied, Expansion::Trial],
        seeds: vec![1, 2],
        elims: vec![false, true],
        heuristic: HeuristicKind::DetAllOutcomes,
        base: SolverConfig::with_epsilon(1e-6),
        timeout: None,
    }
}

fn csv_of(records: &[ssp_cg::bench::RunRecord]) -> String {
    let mut out = Vec::new();
    write_csv(&mut out, records).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn csv_header_is_fixed() {
    assert_eq!(CSV_SCHEMA_VERSION, 1);
    assert_eq!(
        CSV_HEADER,
        "problem,solver,expansion,heuristic,elim,seed,status,value_at_initial,q_values,heuristic_calls,backups,\
         expansions,constraints_checked,constraints_added,actions_eliminated,states,actions,actions_max,\
         density_auc,iterations,value_decrease_events,wall_time_secs"
    );
}

#[test]
fn empty_problem_set_gives_the_header_only() {
    let records = compare(&[], &matrix(), 4);
    assert!(records.is_empty());
    assert_eq!(csv_of(&records), format!("{CSV_HEADER}\n"));
}

#[test]
fn matrix_order_and_size() {
    let specs = matrix().specs();
    assert_eq!(specs.len(), 2 * (1 + 2 + 2 * 2));
    assert_eq!(specs[0].solver, SolverKind::Vi);
    assert!(!specs[0].config.elim);
    assert_eq!(specs[1].solver, SolverKind::Ilao);
    assert_eq!(specs[1].config.expansion, Expansion::All);
    assert!(specs.iter().take(7).all(|s| s.config.seed == 1));
}

#[test]
fn rows_are_identical_across_thread_counts() {
    let problems: Vec<(String, _)> =
        (0..3).map(|i| (format!("p{i}"), apply_fixed_penalty(&suite_problem(i), 500.0).unwrap())).collect();
    let strip = |text: String| -> Vec<String> {
        text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string()).collect()
    };
    let one = strip(csv_of(&compare(&problems, &matrix(), 1)));
    let many = strip(csv_of(&compare(&problems, &matrix(), 5)));
    assert_eq!(one, many);
    assert_eq!(one.len(), 1 + 3 * 14);
}

#[test]
fn rows_report_solver_names_and_agree() {
    let problems = vec![("fig7".to_string(), apply_fixed_penalty(&fig7(), 500.0).unwrap())];
    let records = compare(&problems, &matrix(), 2);
    assert!(records.iter().all(|r| r.status == RunStatus::Solved));
    let vi = &records[0];
    assert_eq!((vi.solver.as_str(), vi.expansion.as_str(), vi.heuristic.as_str()), ("vi", "-", "-"));
    assert_eq!(records[1].expansion, "all");
    let summary = summarize(&records);
    assert_eq!(summary.len(), 1);
    assert!(summary[0].value_spread <= 1e-5);
    assert_eq!(summary[0].unsolved, 0);
    assert_eq!(summary[0].ratios.len(), records.len() - 2);
    let base = summary[0].ratios.iter().find(|(l, _, _)| l == "ilao/all/elim=false/seed=1").unwrap();
    assert_eq!((base.1, base.2), (1.0, 1.0));
}

#[test]
fn timeouts_and_errors_become_statuses() {
    let big = gen_random(&RandomSspParams::new(3000, 2));
    let spec = |solver, heuristic| RunSpec {
        solver,
        heuristic,
        config: SolverConfig::with_epsilon(1e-12),
        timeout: Some(Duration::from_nanos(1)),
    };
    let (rec, res) = run_cell("big", &big, &spec(SolverKind::Vi, HeuristicKind::Zero));
    assert_eq!(rec.status, RunStatus::Timeout);
    assert!(res.is_err());
    assert!(rec.value_at_initial.is_nan());
    let (rec, _) = run_cell("big", &big, &spec(SolverKind::CgIlao, HeuristicKind::Table));
    assert_eq!(rec.status, RunStatus::Error);
    let text = csv_of(&[rec]);
    assert!(text.lines().nth(1).unwrap().starts_with("big,cgilao,tied,table,false,0,error,NaN,"));
}

#[test]
fn density_is_one_for_full_expansion_and_lower_for_partial() {
    let ssp = apply_fixed_penalty(&fig9(), 500.0).unwrap();
    let h = Heuristic::from_problem_table(&ssp).unwrap();
    let full = ilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-6)).unwrap();
    assert_eq!(density_auc(&ssp, full.partial.as_ref().unwrap()).auc, 1.0);
    for i in 0..10 {
        let ssp = suite_problem_with_penalty(i);
        let h = Heuristic::det_ao(&ssp).unwrap();
        let r = cgilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-6).expansion(Expansion::Single)).unwrap();
        let curve = density_auc(&ssp, r.partial.as_ref().unwrap());
        assert!(curve.auc > 0.0 && curve.auc <= 1.0);
        assert!(curve.densities.windows(2).all(|w| w[0] <= w[1]));
        let mean = curve.densities.iter().sum::<f64>() / curve.densities.len() as f64;
        assert!((curve.auc - mean).abs() < 1e-12);
    }
}
