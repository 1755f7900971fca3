//! Heuristic construction, admissibility and the perfect heuristic.

#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use ssp_cg::domains::figures::{fig10, fig7};
use ssp_cg::heuristics::{h_det_ao, h_zero, Heuristic, HeuristicKind, ORACLE_EPSILON};
use ssp_cg::model::SspBuilder;
use ssp_cg::solvers::{cgilao_solve, Expansion, SolverConfig};
use ssp_cg::value::{greedy_action, Counters, ValueFunction};
use ssp_cg::SolveError;

#[test]
fn det_ao_is_admissible_on_the_suite() {
    for i in 0..30 {
        let ssp = suite_problem_with_penalty(i);
        let vstar = oracle_values(&ssp);
        let h = Heuristic::det_ao(&ssp).unwrap();
        for s in 0..ssp.num_states() {
            assert!(h.value(s) <= vstar[s] + 1e-9, "problem {i} state {s}");
            assert!(h.value(s) >= 0.0);
        }
        assert_eq!(h_det_ao(&ssp, ssp.initial()).unwrap(), h.value(ssp.initial()));
    }
}

#[test]
fn det_ao_on_fig7_takes_the_cheapest_outcome() {
    let ssp = fig7();
    let h = Heuristic::det_ao(&ssp).unwrap();
    assert_eq!((0..5).map(|s| h.value(s)).collect::<Vec<_>>(), vec![2.0, 2.0, 1.0, 10.0, 0.0]);
    assert!(h.dead_ends().is_empty());
}

#[test]
fn dead_ends_get_the_penalty_or_fail() {
    let ssp = SspBuilder::new(3, 0)
        .goal(2)
        .action(0, "go", 1.0, &[(2, 0.5), (1, 0.5)])
        .action(1, "stay", 1.0, &[(1, 1.0)])
        .build()
        .unwrap();
    assert!(matches!(Heuristic::det_ao(&ssp), Err(SolveError::DeadEnd(1))));
    let p = ssp_cg::model::apply_fixed_penalty(&ssp, 40.0).unwrap();
    let h = Heuristic::det_ao(&p).unwrap();
    assert_eq!(h.dead_ends(), &[1]);
    assert_eq!(h.value(1), 40.0);
}

#[test]
fn oracle_is_a_fixed_point() {
    for i in 0..20 {
        let ssp = suite_problem_with_penalty(i);
        let h = Heuristic::build(HeuristicKind::Oracle, &ssp).unwrap();
        let v = ValueFunction::from_vec((0..ssp.num_states()).map(|s| h.value(s)).collect());
        for s in 0..ssp.num_states() {
            if ssp.is_goal(s) {
                continue;
            }
            let g = greedy_action(&ssp, &v, s, &mut Counters::default()).unwrap();
            assert!((g.value - v.get(s)).abs() <= 1e-7, "problem {i} state {s}");
        }
    }
    assert_eq!(ORACLE_EPSILON, 1e-10);
}

#[test]
fn heuristic_values_are_requested_once_per_state() {
    for i in 0..20 {
        let ssp = suite_problem_with_penalty(i);
        let h = Heuristic::det_ao(&ssp).unwrap();
        for e in Expansion::ALL {
            let r = cgilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-6).expansion(e)).unwrap();
            let non_goals = (ssp.num_states() - ssp.goals().len()) as u64;
            assert!(r.counters.heuristic_calls <= non_goals, "problem {i} {e}");
            assert!(r.counters.heuristic_calls >= 1);
        }
    }
}

#[test]
fn kinds_parse_and_build() {
    for (text, kind) in [
        ("zero", HeuristicKind::Zero),
        ("det-ao", HeuristicKind::DetAllOutcomes),
        ("oracle", HeuristicKind::Oracle),
        ("table", HeuristicKind::Table),
    ] {
        assert_eq!(text.parse::<HeuristicKind>().unwrap(), kind);
        assert_eq!(kind.to_string(), text);
    }
    assert!("nope".parse::<HeuristicKind>().is_err());
    assert_eq!(Heuristic::build(HeuristicKind::Table, &fig10()).unwrap().value(1), 10.0);
    let plain = suite_problem(0);
    assert!(matches!(Heuristic::build(HeuristicKind::Table, &plain), Err(SolveError::InvalidConfig(_))));
    assert_eq!(h_zero(3), 0.0);
    assert_eq!(Heuristic::table(vec![1.0]).value(5), 0.0);
}
