//! Step-by-step traces of the small hand-built problems.

mod common;

use common::*;
use ssp_cg::domains::figures::{fig10, fig11_chain, fig4, fig7, fig9};
use ssp_cg::domains::gridworld::gen_gridworld;
use ssp_cg::heuristics::Heuristic;
use ssp_cg::io::{check_lp_feasibility, LinearProgram};
use ssp_cg::solvers::{cgilao_solve_observed, ilao_solve_observed, vi_solve, Expansion, SolverConfig, ViMode};
use ssp_cg::value::{check_econsistency, ValueFunction};

fn table(ssp: &ssp_cg::ExplicitSsp) -> Heuristic {
    Heuristic::from_problem_table(ssp).expect("figure carries a table")
}

#[test]
fn fig7_ilao_expands_s0_s2_s1_and_never_s3() {
    let ssp = fig7();
    let mut rec = Recorder::default();
    let r = ilao_solve_observed(&ssp, &table(&ssp), &SolverConfig::with_epsilon(1e-9), &mut rec).unwrap();
    assert_eq!(rec.expanded, vec![0, 2, 1]);
    assert!((r.value_at_initial - 2.9 / 0.95).abs() < 1e-6);
    assert_eq!(r.iterations, 3);
    let first = &rec.snapshots[0];
    assert_eq!(first.internal, vec![0]);
    assert_eq!(first.artificial, vec![1, 2, 3]);
}

#[test]
fn fig7_first_iteration_values() {
    let ssp = fig7();
    let mut rec = Recorder::default();
    ilao_solve_observed(&ssp, &table(&ssp), &SolverConfig::with_epsilon(1e-9), &mut rec).unwrap();
    let v = &rec.snapshots[0].values;
    assert!((v[0] - 2.0).abs() < 1e-12);
    assert_eq!(rec.snapshots[0].policy, vec![(0, 1)]);
    assert!((rec.snapshots[1].values[0] - 3.0).abs() < 1e-12);
}

#[test]
fn fig9_increase_then_repair_then_decrease() {
    let ssp = fig9();
    let mut rec = Recorder::default();
    let cfg = SolverConfig::with_epsilon(1e-4).expansion(Expansion::Tied);
    let r = cgilao_solve_observed(&ssp, &table(&ssp), &cfg, &mut rec).unwrap();
    assert!((r.value_at_initial - 4.0).abs() < 1e-9);
    assert!(r.value_decrease_events >= 1);
    assert!(r.counters.constraints_added >= 1);
    let partial = r.partial.as_ref().unwrap();
    assert!(partial.includes(2), "a1' joins the partial problem");
    assert!(partial.is_internal(2) && partial.is_internal(3));
}

#[test]
fn fig10_stops_consistent_only_on_the_partial_problem() {
    let ssp = fig10();
    let cfg = SolverConfig::with_epsilon(1e-4).expansion(Expansion::Tied);
    let r = cgilao_solve_observed(&ssp, &table(&ssp), &cfg, &mut Recorder::default()).unwrap();
    let v = r.value_function.as_slice();
    assert_eq!((v[0], v[1], v[3]), (9.0, 10.0, 6.0));
    assert!(r.terminated_econsistent_on_partial);
    assert!(!check_econsistency(&ssp, &r.value_function, 1e-4));
}

#[test]
fn fig11_untracked_increases_accumulate() {
    let eps = 1e-4;
    let ssp = fig11_chain(3, eps);
    let h = table(&ssp);
    let loose = SolverConfig::with_epsilon(eps).expansion(Expansion::Tied);
    let r = cgilao_solve_observed(&ssp, &h, &loose, &mut Recorder::default()).unwrap();
    assert!((r.value_at_initial - (4.0 + 2.0 * eps)).abs() < 1e-9);
    assert_eq!(r.value_increase_events, 0);

    let strict = SolverConfig::with_epsilon(eps / 10.0).eta(0.0).expansion(Expansion::Tied);
    let r = cgilao_solve_observed(&ssp, &h, &strict, &mut Recorder::default()).unwrap();
    assert!((r.value_at_initial - (4.0 + eps)).abs() < 1e-9);
}

#[test]
fn gridworld_value_and_table() {
    let ssp = gen_gridworld();
    let r = vi_solve(&ssp, 1e-12, ViMode::Async).unwrap();
    assert!((r.value_at_initial - 6.0).abs() < 1e-6);
    assert_eq!(ssp.heuristic_table().unwrap(), &[5.0, 3.0, 2.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
    let cfg = SolverConfig::with_epsilon(1e-9).expansion(Expansion::Single);
    let r = cgilao_solve_observed(&ssp, &table(&ssp), &cfg, &mut Recorder::default()).unwrap();
    assert!((r.value_at_initial - 6.0).abs() < 1e-6);
}

#[test]
fn fig4_partial_lp_has_a_non_optimal_solution() {
    let ssp = fig4();
    let full = LinearProgram::for_ssp(&ssp);
    let vstar = ValueFunction::from_vec(oracle_values(&ssp));
    assert_eq!(vstar.as_slice(), &[4.0, 4.0, 2.0, 2.0, 1.0, 0.0]);
    let report = check_lp_feasibility(&full, &vstar, 1e-9);
    assert!(report.feasible());
    assert!(report.is_tight(0, 1));
    assert!(report.slack.contains(&(0, 0)));

    let labelled = ValueFunction::from_vec(vec![4.0, 3.0, 2.0, 2.0, 1.0, 0.0]);
    let report = check_lp_feasibility(&full, &labelled, 1e-9);
    assert!(report.violated.is_empty());
    assert!(report.slack.contains(&(1, 2)));
}
