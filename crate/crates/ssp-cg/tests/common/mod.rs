//! Helpers shared by the integration tests.

#![allow(dead_code)]

use ssp_cg::domains::random::{gen_random, RandomSspParams};
use ssp_cg::model::{apply_fixed_penalty, ExplicitSsp, StateId};
use ssp_cg::partial::ViolationSet;
use ssp_cg::solvers::{vi_solve, IterationView, SolveObserver, ViMode};

/// Optimal values from value iteration at `1e-9`.
pub fn oracle_values(ssp: &ExplicitSsp) -> Vec<f64> {
    vi_solve(ssp, 1e-9, ViMode::Async).expect("oracle converges").value_function.as_slice().to_vec()
}

/// `Q*(s, a)` from oracle values.
pub fn q_of(ssp: &ExplicitSsp, v: &[f64], a: usize) -> f64 {
    let act = ssp.action(a);
    act.cost + act.outcomes.iter().map(|o| o.prob * v[o.target]).sum::<f64>()
}

/// Parameters of the `i`-th problem of the random suite.
pub fn suite_params(i: u64) -> RandomSspParams {
    let sizes = [8, 15, 30, 60, 120, 200];
    RandomSspParams {
        num_states: sizes[(i as usize) % sizes.len()],
        actions_min: 1,
        actions_max: 5,
        outcomes_min: 1,
        outcomes_max: 3,
        cost_min: 1.0,
        cost_max: 10.0,
        num_goals: 1 + (i as usize % 2),
        seed: 1000 + i,
    }
}

/// The `i`-th problem of the random suite.
pub fn suite_problem(i: u64) -> ExplicitSsp {
    gen_random(&suite_params(i))
}

/// The `i`-th problem of the random suite with give-up actions at cost 500.
pub fn suite_problem_with_penalty(i: u64) -> ExplicitSsp {
    apply_fixed_penalty(&suite_problem(i), 500.0).expect("valid penalty")
}

/// A snapshot of one main-loop iteration.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub iteration: u64,
    pub internal: Vec<StateId>,
    pub artificial: Vec<StateId>,
    pub values: Vec<f64>,
    pub gamma: ViolationSet,
    pub policy: Vec<(StateId, usize)>,
    pub actions: Vec<Vec<usize>>,
}

/// Records snapshots, expansion order and elimination calls, and checks the
/// violation-set soundness condition against `vstar` when it is given.
#[derive(Default)]
pub struct Recorder {
    pub snapshots: Vec<Snapshot>,
    pub expanded: Vec<StateId>,
    pub elimination_calls: usize,
    pub elimination_with_pending: usize,
    pub vstar: Option<Vec<f64>>,
    pub epsilon: f64,
    pub soundness_violations: Vec<String>,
}

impl Recorder {
    pub fn checking(vstar: Vec<f64>, epsilon: f64) -> Self {
        Recorder { vstar: Some(vstar), epsilon, ..Default::default() }
    }
}

impl SolveObserver for Recorder {
    fn iteration_end(&mut self, view: &IterationView<'_>) {
        let n = view.ssp.num_states();
        let values: Vec<f64> = (0..n).map(|s| view.value(s)).collect();
        let internal: Vec<StateId> = view.partial.internal_states().collect();
        if let Some(vstar) = &self.vstar {
            for &s in &internal {
                for &a in view.ssp.actions_of(s) {
                    if view.partial.is_eliminated(a) {
                        continue;
                    }
                    let violated = values[s] > view.q(a) + self.epsilon;
                    if violated && !view.gamma.contains(&(s, a)) && values[s] > vstar[s] + 1e-9 {
                        self.soundness_violations.push(format!(
                            "iteration {}: state {s} action {a}: V = {}, Q = {}, V* = {}",
                            view.iteration,
                            values[s],
                            view.q(a),
                            vstar[s]
                        ));
                    }
                }
            }
        }
        self.snapshots.push(Snapshot {
            iteration: view.iteration,
            artificial: view.partial.artificial_goals().collect(),
            internal,
            values,
            gamma: view.gamma.clone(),
            policy: view.policy.iter().collect(),
            actions: (0..n).map(|s| view.partial.actions(s).to_vec()).collect(),
        });
    }

    fn expanded(&mut self, state: StateId) {
        self.expanded.push(state);
    }

    fn elimination(&mut self, _state: StateId, gamma_len: usize) {
        self.elimination_calls += 1;
        if gamma_len > 0 {
            self.elimination_with_pending += 1;
        }
    }
}
