//! The Bellman LP view and its text format.

mod common;

use common::*;
use ssp_cg::domains::figures::{fig7, fig9};
use ssp_cg::heuristics::Heuristic;
use ssp_cg::io::{check_lp_feasibility, export_lp, LinearProgram};
use ssp_cg::model::SspBuilder;
use ssp_cg::partial::PartialSsp;
use ssp_cg::solvers::{cgilao_solve, vi_solve, Expansion, SolverConfig, ViMode};
use ssp_cg::value::ValueFunction;

#[test]
fn full_lp_is_feasible_at_the_optimum_with_policy_rows_tight() {
    for i in 0..20 {
        let ssp = suite_problem_with_penalty(i);
        let r = vi_solve(&ssp, 1e-12, ViMode::Async).unwrap();
        let lp = LinearProgram::for_ssp(&ssp);
        assert_eq!(lp.constraints.len(), ssp.num_actions());
        assert_eq!(lp.equalities.len(), ssp.goals().len());
        let report = check_lp_feasibility(&lp, &r.value_function, 1e-6);
        assert!(report.feasible(), "problem {i}: {:?}", report.violated);
        for (s, a) in r.policy.iter() {
            assert!(report.is_tight(s, a));
        }
    }
}

#[test]
fn raising_a_value_violates_a_row() {
    let ssp = fig7();
    let r = vi_solve(&ssp, 1e-12, ViMode::Async).unwrap();
    let mut v = r.value_function.as_slice().to_vec();
    v[1] += 1.0;
    let report = check_lp_feasibility(&LinearProgram::for_ssp(&ssp), &ValueFunction::from_vec(v), 1e-6);
    assert!(!report.feasible());
    assert_eq!(report.violated, vec!["c_1_3".to_string()]);
    assert!((report.max_violation - 1.0).abs() < 1e-9);
}

#[test]
fn partial_lp_pins_fringe_values_to_the_heuristic() {
    let ssp = fig7();
    let h = Heuristic::from_problem_table(&ssp).unwrap();
    let mut p = PartialSsp::new(&ssp);
    p.add_actions(&ssp, 0, &[0, 1, 2]).unwrap();
    let lp = LinearProgram::for_partial(&ssp, &p, &h);
    assert_eq!(lp.constraints.len(), 3);
    assert_eq!(lp.equalities, vec![(1, 2.0), (2, 1.0), (3, 10.0)]);
}

#[test]
fn final_partial_lp_of_cg_is_feasible() {
    let ssp = fig9();
    let h = Heuristic::from_problem_table(&ssp).unwrap();
    let r = cgilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-9).expansion(Expansion::Tied)).unwrap();
    let lp = LinearProgram::for_partial(&ssp, r.partial.as_ref().unwrap(), &h);
    let report = check_lp_feasibility(&lp, &r.value_function, 1e-6);
    assert!(report.feasible());
    for (s, a) in r.policy.iter() {
        assert!(report.is_tight(s, a));
    }
}

#[test]
fn text_round_trip_and_self_loops() {
    let ssp = SspBuilder::new(2, 0)
        .goal(1)
        .action(0, "retry", 1.0, &[(0, 0.25), (1, 0.75)])
        .action(0, "sure", 2.0, &[(1, 1.0)])
        .build()
        .unwrap();
    let lp = LinearProgram::for_ssp(&ssp);
    let text = lp.to_lp_string();
    assert!(text.starts_with("\\ Bellman inequalities\nMaximize\n obj: V_0\nSubject To\n"));
    assert!(text.contains(" c_0_0: 0.75 V_0 - 0.75 V_1 <= 1\n"), "{text}");
    assert!(text.contains(" e_1: V_1 = 0\n"));
    assert!(text.ends_with("End\n"));
    assert_eq!(LinearProgram::parse(&text).unwrap(), lp);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.lp");
    export_lp(&lp, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn malformed_lp_text_is_rejected_with_a_line() {
    let err = LinearProgram::parse("Maximize\n obj: V_0\nSubject To\n c_0_0: V_0 - V_1 >= 3\nEnd\n").unwrap_err();
    assert!(matches!(err, ssp_cg::error::IoError::Lp { line: 4, .. }));
    assert!(LinearProgram::parse("Subject To\nEnd\n").is_err());
}
