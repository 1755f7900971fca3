//! Solver behaviour: agreement, determinism, guards and elimination.

#![allow(clippy::needless_range_loop)]

mod common;

use std::time::{Duration, Instant};

use common::*;
use ssp_cg::domains::figures::{fig7, fig9};
use ssp_cg::heuristics::Heuristic;
use ssp_cg::model::{apply_fixed_penalty, SspBuilder};
use ssp_cg::solvers::{
    cgilao_solve, cgilao_solve_observed, ilao_solve, solve, vi_solve, Expansion, SolverConfig, SolverKind, ViMode,
};
use ssp_cg::value::check_econsistency;
use ssp_cg::SolveError;

#[test]
fn value_iteration_modes_agree() {
    for i in 0..10 {
        let ssp = suite_problem_with_penalty(i);
        let a = vi_solve(&ssp, 1e-10, ViMode::Async).unwrap();
        let b = vi_solve(&ssp, 1e-10, ViMode::Sync).unwrap();
        assert!((a.value_at_initial - b.value_at_initial).abs() < 1e-6);
        assert!(check_econsistency(&ssp, &a.value_function, 1e-9));
        assert!(a.partial.is_none());
    }
}

#[test]
fn every_solver_matches_the_oracle_on_the_figures() {
    for ssp in [fig7(), fig9()] {
        let vstar = oracle_values(&ssp)[ssp.initial()];
        let h = Heuristic::from_problem_table(&ssp).unwrap();
        for kind in [SolverKind::Vi, SolverKind::Ilao, SolverKind::CgIlao] {
            for e in Expansion::ALL {
                let r = solve(kind, &ssp, &h, &SolverConfig::with_epsilon(1e-8).expansion(e)).unwrap();
                assert!((r.value_at_initial - vstar).abs() < 1e-6, "{kind} {e}");
            }
        }
    }
}

#[test]
fn trial_expansion_is_deterministic_per_seed() {
    for i in 0..10 {
        let ssp = suite_problem_with_penalty(i);
        let h = Heuristic::det_ao(&ssp).unwrap();
        let cfg = SolverConfig::with_epsilon(1e-6).expansion(Expansion::Trial).seed(11);
        let a = cgilao_solve(&ssp, &h, &cfg).unwrap();
        let b = cgilao_solve(&ssp, &h, &cfg).unwrap();
        assert_eq!(a.value_function, b.value_function);
        assert_eq!(a.counters, b.counters);
        assert_eq!(a.partial_sizes, b.partial_sizes);
        let c = cgilao_solve(&ssp, &h, &cfg.clone().seed(12)).unwrap();
        assert!((a.value_at_initial - c.value_at_initial).abs() < 1e-4);
    }
}

#[test]
fn trials_without_steps_fall_back_to_tied_expansion() {
    for i in 0..10 {
        let ssp = suite_problem_with_penalty(i);
        let h = Heuristic::det_ao(&ssp).unwrap();
        let mut cfg = SolverConfig::with_epsilon(1e-6).expansion(Expansion::Trial);
        cfg.t_max = 0;
        let trial = cgilao_solve(&ssp, &h, &cfg).unwrap();
        let tied = cgilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-6).expansion(Expansion::Tied)).unwrap();
        assert_eq!(trial.value_function, tied.value_function);
        assert_eq!(trial.partial_sizes, tied.partial_sizes);
    }
}

#[test]
fn elimination_drops_an_expensive_decoy() {
    let mut b = SspBuilder::new(6, 0).goal(5);
    b.push_action(0, "good", 1.0, &[(5, 1.0)]);
    b.push_action(0, "decoy", 1.0, &[(1, 1.0)]);
    for s in 1..5 {
        b.push_action(s, "step", 10.0, &[(s + 1, 1.0)]);
    }
    let ssp = apply_fixed_penalty(&b.build().unwrap(), 500.0).unwrap();
    let decoy = ssp.actions_of(0)[1];
    let h = Heuristic::det_ao(&ssp).unwrap();
    for kind in [SolverKind::Ilao, SolverKind::CgIlao] {
        let cfg = SolverConfig::with_epsilon(1e-6).expansion(Expansion::All).elim(true);
        let r = solve(kind, &ssp, &h, &cfg).unwrap();
        assert_eq!(r.value_at_initial, 1.0);
        assert!(r.eliminated.contains(&(0, decoy)), "{kind}: {:?}", r.eliminated);
        assert!(r.partial.as_ref().unwrap().is_eliminated(decoy));
    }
}

#[test]
fn elimination_needs_give_up_actions() {
    let ssp = fig7();
    let h = Heuristic::from_problem_table(&ssp).unwrap();
    let r = cgilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-6).elim(true));
    assert!(matches!(r, Err(SolveError::InvalidConfig(_))));
}

#[test]
fn invalid_configurations_are_rejected() {
    let ssp = fig7();
    let h = Heuristic::zero();
    let mut bad = vec![SolverConfig::with_epsilon(0.0), SolverConfig::with_epsilon(-1.0), SolverConfig::with_epsilon(1e-4).eta(-1.0)];
    let mut zero_iter = SolverConfig::with_epsilon(1e-4);
    zero_iter.max_iterations = 0;
    bad.push(zero_iter);
    for cfg in bad {
        for kind in [SolverKind::Vi, SolverKind::Ilao, SolverKind::CgIlao] {
            assert!(matches!(solve(kind, &ssp, &h, &cfg), Err(SolveError::InvalidConfig(_))), "{kind} {cfg:?}");
        }
    }
}

#[test]
fn guards_turn_long_runs_into_errors() {
    let ssp = suite_problem_with_penalty(5);
    let h = Heuristic::zero();
    let mut cfg = SolverConfig::with_epsilon(1e-12);
    cfg.max_iterations = 2;
    for kind in [SolverKind::Vi, SolverKind::Ilao, SolverKind::CgIlao] {
        assert!(matches!(solve(kind, &ssp, &h, &cfg), Err(SolveError::NonConvergence(2))), "{kind}");
    }
    let mut cfg = SolverConfig::with_epsilon(1e-12);
    cfg.deadline = Some(Instant::now() - Duration::from_secs(1));
    for kind in [SolverKind::Vi, SolverKind::Ilao, SolverKind::CgIlao] {
        assert!(matches!(solve(kind, &ssp, &h, &cfg), Err(SolveError::Timeout(_))), "{kind}");
    }
}

#[test]
fn ilao_values_are_admissible_bounds_on_the_envelope() {
    for i in 0..10 {
        let ssp = suite_problem_with_penalty(i);
        let vstar = oracle_values(&ssp);
        let h = Heuristic::det_ao(&ssp).unwrap();
        let r = ilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-8)).unwrap();
        for s in 0..ssp.num_states() {
            assert!(r.value_function.get(s) <= vstar[s] + 1e-6, "problem {i} state {s}");
        }
    }
}

#[test]
fn perfect_heuristic_single_expansion_adds_only_optimal_actions() {
    for i in 0..10 {
        let ssp = suite_problem_with_penalty(i);
        let h = Heuristic::oracle(&ssp, 1e-12).unwrap();
        let mut rec = Recorder::default();
        let cfg = SolverConfig::with_epsilon(1e-6).expansion(Expansion::Single);
        let r = cgilao_solve_observed(&ssp, &h, &cfg, &mut rec).unwrap();
        let p = r.partial.as_ref().unwrap();
        for s in p.internal_states() {
            assert_eq!(p.actions(s).len(), 1, "problem {i} state {s}");
        }
        assert_eq!(r.value_decrease_events + r.value_increase_events, 0);
        assert_eq!(r.counters.constraints_added, 0);
    }
}

#[test]
fn dead_ends_fall_back_to_giving_up() {
    let base = SspBuilder::new(3, 0)
        .goal(2)
        .action(0, "risky", 1.0, &[(2, 0.5), (1, 0.5)])
        .action(1, "stuck", 1.0, &[(1, 1.0)])
        .build()
        .unwrap();
    let ssp = apply_fixed_penalty(&base, 50.0).unwrap();
    let vstar = oracle_values(&ssp)[0];
    assert!((vstar - 26.0).abs() < 1e-6);
    let h = Heuristic::det_ao(&ssp).unwrap();
    for e in Expansion::ALL {
        let r = cgilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-8).expansion(e)).unwrap();
        assert!((r.value_at_initial - vstar).abs() < 1e-6, "{e}");
    }
}
