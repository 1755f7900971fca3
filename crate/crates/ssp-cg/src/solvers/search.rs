//! State shared by iLAO* and CG-iLAO*: the partial problem, lazily
//! initialised values, the candidate policy, the optional upper bound and
//! the instrumentation.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::heuristics::Heuristic;
use crate::model::{ActionId, ExplicitSsp, StateId};
use crate::partial::{PartialSsp, ViolationSet};
use crate::value::{check_econsistency, dfs_postorder, q_raw, Counters, Greedy, PolicyMap, ValueFunction};

use super::elimination::select_eliminated;
use super::{IterationView, SolveObserver, SolveResult, SolverConfig};

pub(crate) struct Search<'a> {
    pub ssp: &'a ExplicitSsp,
    pub h: &'a Heuristic,
    pub cfg: &'a SolverConfig,
    pub partial: PartialSsp,
    pub v: Vec<f64>,
    pub touched: Vec<bool>,
    pub ub: Option<Vec<f64>>,
    pub policy: PolicyMap,
    pub counters: Counters,
    pub gamma: ViolationSet,
    pub rng: ChaCha8Rng,
    pub iterations: u64,
    pub sweeps: u64,
    pub decreases: u64,
    pub increases: u64,
    pub eliminated: Vec<(StateId, ActionId)>,
    pub observer: &'a mut dyn SolveObserver,
}

impl<'a> Search<'a> {
    pub fn new(
        ssp: &'a ExplicitSsp,
        h: &'a Heuristic,
        cfg: &'a SolverConfig,
        observer: &'a mut dyn SolveObserver,
    ) -> Result<Self, SolveError> {
        cfg.validate()?;
        let n = ssp.num_states();
        let ub = if cfg.elim {
            if !ssp.has_give_up_everywhere() {
                return Err(SolveError::InvalidConfig(
                    "action elimination needs the fixed-penalty transform for its upper bound".to_string(),
                ));
            }
            Some((0..n).map(|s| ssp.penalty_at(s).unwrap_or(0.0)).collect())
        } else {
            None
        };
        let mut search = Search {
            ssp,
            h,
            cfg,
            partial: PartialSsp::new(ssp),
            v: vec![0.0; n],
            touched: vec![false; n],
            ub,
            policy: PolicyMap::empty(n),
            counters: Counters::default(),
            gamma: ViolationSet::new(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            iterations: 0,
            sweeps: 0,
            decreases: 0,
            increases: 0,
            eliminated: Vec::new(),
            observer,
        };
        search.touch(ssp.initial());
        Ok(search)
    }

    /// The penalty that bounds every optimal value from above.
    pub fn penalty(&self, s: StateId) -> f64 {
        self.ssp.penalty_at(s).unwrap_or(self.cfg.penalty)
    }

    pub fn touch(&mut self, s: StateId) {
        if !self.touched[s] {
            self.touched[s] = true;
            if !self.ssp.is_goal(s) {
                self.v[s] = self.h.value(s);
                self.counters.heuristic_calls += 1;
            }
        }
    }

    pub fn value(&mut self, s: StateId) -> f64 {
        self.touch(s);
        self.v[s]
    }

    pub fn q(&mut self, a: ActionId) -> f64 {
        for i in 0..self.ssp.action(a).outcomes.len() {
            let t = self.ssp.action(a).outcomes[i].target;
            self.touch(t);
        }
        q_raw(self.ssp, &self.v, a, &mut self.counters)
    }

    pub fn q_all(&mut self, acts: &[ActionId]) -> Vec<(ActionId, f64)> {
        acts.iter().map(|&a| (a, self.q(a))).collect()
    }

    /// Actions of the parent at `s` that have not been eliminated.
    pub fn candidates(&self, s: StateId) -> Vec<ActionId> {
        self.ssp.actions_of(s).iter().copied().filter(|&a| !self.partial.is_eliminated(a)).collect()
    }

    pub fn greedy_of(qs: &[(ActionId, f64)]) -> Option<Greedy> {
        let mut best: Option<Greedy> = None;
        for &(a, q) in qs {
            if best.is_none_or(|b| q < b.value) {
                best = Some(Greedy { action: a, value: q });
            }
        }
        best
    }

    /// Greedy action over `Â(s)`.
    pub fn greedy_internal(&mut self, s: StateId) -> Result<Greedy, SolveError> {
        let acts = self.partial.actions(s).to_vec();
        let qs = self.q_all(&acts);
        Self::greedy_of(&qs).ok_or(SolveError::Internal(format!("internal state {s} has no action")))
    }

    /// Adds `acts` to `Â(s)`, recording the expansion if `s` becomes internal.
    pub fn add(&mut self, s: StateId, acts: &[ActionId]) -> Result<bool, SolveError> {
        let was_internal = self.partial.is_internal(s);
        self.partial.add_actions(self.ssp, s, acts)?;
        if !was_internal {
            self.touch(s);
            self.counters.expansions += 1;
            self.observer.expanded(s);
        }
        Ok(!was_internal)
    }

    /// Post-order of the candidate policy's envelope from `s0`.
    pub fn envelope(&self) -> Vec<StateId> {
        dfs_postorder(&self.partial.view(self.ssp), &self.policy, &[self.ssp.initial()])
    }

    pub fn begin_sweep(&mut self) -> Result<(), SolveError> {
        if self.sweeps >= self.cfg.max_iterations {
            return Err(SolveError::NonConvergence(self.sweeps));
        }
        if self.cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SolveError::Timeout(self.sweeps));
        }
        self.sweeps += 1;
        Ok(())
    }

    /// Computes `Q(s, a)` for every `a ∈ Â(s)` and the greedy choice, without
    /// storing anything.
    pub fn evaluate(&mut self, s: StateId) -> Result<(Greedy, Vec<(ActionId, f64)>), SolveError> {
        let acts = self.partial.actions(s).to_vec();
        let qs = self.q_all(&acts);
        let g = Self::greedy_of(&qs).ok_or(SolveError::Internal(format!("internal state {s} has no action")))?;
        self.counters.backups += 1;
        Ok((g, qs))
    }

    /// Upper-bound backup at `s` followed, when `allowed`, by elimination.
    ///
    /// Returns the greedy choice after elimination. Nothing happens until a
    /// true goal has entered the partial problem.
    pub fn bounds_step(
        &mut self,
        s: StateId,
        greedy: Greedy,
        lb_qs: &[(ActionId, f64)],
        allowed: bool,
    ) -> Result<Greedy, SolveError> {
        if self.ub.is_none() || !self.partial.has_true_goal() {
            return Ok(greedy);
        }
        let mut ub_qs = Vec::with_capacity(lb_qs.len());
        for &(a, _) in lb_qs {
            self.counters.q_values += 1;
            let act = self.ssp.action(a);
            let ub = self.ub.as_ref().expect("checked above");
            let q = act.cost + act.outcomes.iter().map(|o| o.prob * ub[o.target]).sum::<f64>();
            ub_qs.push((a, q));
        }
        let best_ub = ub_qs.iter().map(|&(_, q)| q).fold(f64::INFINITY, f64::min);
        let ub = self.ub.as_mut().expect("checked above");
        if best_ub < ub[s] {
            ub[s] = best_ub;
        }
        if !allowed {
            return Ok(greedy);
        }
        self.observer.elimination(s, self.gamma.len());
        let gone = select_eliminated(lb_qs, best_ub);
        if gone.is_empty() {
            return Ok(greedy);
        }
        if gone.len() == lb_qs.len() {
            return Err(SolveError::Internal(format!("elimination would remove every action at state {s}")));
        }
        for &a in &gone {
            self.partial.eliminate(s, a);
            self.counters.actions_eliminated += 1;
            self.eliminated.push((s, a));
        }
        let rest: Vec<(ActionId, f64)> = lb_qs.iter().copied().filter(|(a, _)| !gone.contains(a)).collect();
        Ok(Self::greedy_of(&rest).expect("at least one action survives"))
    }

    /// Records a value change of `V(s)` from `old` to `new` relative to `η`.
    pub fn classify_change(&mut self, old: f64, new: f64) -> Change {
        if new - old > self.cfg.eta {
            self.increases += 1;
            Change::Increase
        } else if old - new > self.cfg.eta {
            self.decreases += 1;
            Change::Decrease
        } else {
            Change::Small
        }
    }

    pub fn notify_iteration(&mut self, residual: f64) {
        let view = IterationView {
            iteration: self.iterations,
            ssp: self.ssp,
            partial: &self.partial,
            values: &self.v,
            touched: &self.touched,
            heuristic: self.h,
            policy: &self.policy,
            gamma: &self.gamma,
            residual,
        };
        self.observer.iteration_end(&view);
    }

    pub fn finish(self) -> SolveResult {
        let n = self.ssp.num_states();
        let mut v = self.v;
        for (s, value) in v.iter_mut().enumerate() {
            if !self.touched[s] && !self.ssp.is_goal(s) {
                *value = self.h.value(s);
            }
        }
        let vf = ValueFunction::from_vec(v);
        let view = self.partial.view(self.ssp);
        let mut policy = PolicyMap::empty(n);
        for s in dfs_postorder(&view, &self.policy, &[self.ssp.initial()]) {
            if let (true, Some(a)) = (self.partial.is_internal(s), self.policy.get(s)) {
                policy.set(s, a);
            }
        }
        SolveResult {
            value_at_initial: vf.get(self.ssp.initial()),
            terminated_econsistent_on_partial: check_econsistency(&view, &vf, self.cfg.epsilon),
            value_function: vf,
            policy,
            counters: self.counters,
            partial_sizes: self.partial.sizes(self.ssp),
            iterations: self.iterations,
            sweeps: self.sweeps,
            value_decrease_events: self.decreases,
            value_increase_events: self.increases,
            partial: Some(self.partial),
            eliminated: self.eliminated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Change {
    Increase,
    Decrease,
    Small,
}
