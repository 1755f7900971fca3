//! Fringe expansion strategies.

use rand::Rng;

use crate::determinize::{shortest_plan, Determinization};
use crate::error::SolveError;
use crate::model::{ActionId, StateId};

use super::search::Search;
use super::Expansion;

/// Result of a trial rollout.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    /// The cycle-free `(state, action)` steps and the state the trial ended in.
    Success { steps: Vec<(StateId, ActionId)>, end: StateId },
    /// The trial gave up.
    Failure,
}

/// Splices out cycles: for each state, everything between its first and last
/// occurrence is removed.
///
/// `states` has one more entry than `actions`; `actions[i]` leads from
/// `states[i]` to `states[i + 1]`.
///
/// ```
/// use ssp_cg::solvers::remove_cycles;
///
/// // s -> u -> s -> u -> g
/// let (states, actions) = remove_cycles(&[0, 1, 0, 1, 9], &[10, 11, 12, 13]);
/// assert_eq!(states, vec![0, 1, 9]);
/// assert_eq!(actions, vec![12, 13]);
/// ```
pub fn remove_cycles(states: &[StateId], actions: &[ActionId]) -> (Vec<StateId>, Vec<ActionId>) {
    assert_eq!(states.len(), actions.len() + 1, "a trajectory has one more state than actions");
    let last = states.len() - 1;
    let mut out_s = Vec::new();
    let mut out_a = Vec::new();
    let mut i = 0;
    while i < last {
        let j = (i..=last).rev().find(|&k| states[k] == states[i]).expect("i itself matches");
        if j == last {
            break;
        }
        out_s.push(states[j]);
        out_a.push(actions[j]);
        i = j + 1;
    }
    out_s.push(states[last]);
    (out_s, out_a)
}

impl Search<'_> {
    /// Expands every action of `s` and chooses the greedy one.
    pub fn expand_all(&mut self, s: StateId) -> Result<(), SolveError> {
        let acts = self.candidates(s);
        if acts.is_empty() {
            return Err(SolveError::DeadEnd(s));
        }
        self.add(s, &acts)?;
        let g = self.greedy_internal(s)?;
        self.policy.set(s, g.action);
        Ok(())
    }

    /// Expands the single greedy action of `s`.
    pub fn expand_single(&mut self, s: StateId) -> Result<(), SolveError> {
        let acts = self.candidates(s);
        let qs = self.q_all(&acts);
        let g = Self::greedy_of(&qs).ok_or(SolveError::DeadEnd(s))?;
        self.add(s, &[g.action])?;
        self.policy.set(s, g.action);
        Ok(())
    }

    /// Expands every action of `s` whose Q-value equals the minimum exactly.
    pub fn expand_tied(&mut self, s: StateId) -> Result<(), SolveError> {
        let acts = self.candidates(s);
        let qs = self.q_all(&acts);
        let g = Self::greedy_of(&qs).ok_or(SolveError::DeadEnd(s))?;
        let tied: Vec<ActionId> =
            qs.iter().filter(|&&(a, q)| q == g.value && !self.partial.includes(a)).map(|&(a, _)| a).collect();
        if !tied.is_empty() {
            self.add(s, &tied)?;
        }
        self.policy.set(s, g.action);
        Ok(())
    }

    /// Expands a fringe state with the configured strategy.
    pub fn expand_fringe(&mut self, s: StateId) -> Result<(), SolveError> {
        match self.cfg.expansion {
            Expansion::All => self.expand_all(s),
            Expansion::Single => self.expand_single(s),
            Expansion::Tied => self.expand_tied(s),
            Expansion::Trial => match self.trial(s, self.cfg.t_max) {
                TrialOutcome::Success { steps, .. } => {
                    for (x, a) in steps {
                        self.add(x, &[a])?;
                        self.policy.set(x, a);
                    }
                    Ok(())
                }
                TrialOutcome::Failure => self.expand_tied(s),
            },
            Expansion::DetPlanAo => self.expand_plan(s, Determinization::AllOutcomes),
            Expansion::DetPlanMlo => self.expand_plan(s, Determinization::MostLikely),
        }
    }

    /// A greedy rollout from the fringe state `start`.
    ///
    /// The rollout succeeds when it reaches a goal or a state of `Ŝ` other
    /// than `start`. At a state with an action leading into that target set
    /// it takes the cheapest such action. Elsewhere every outcome of every
    /// action is outside it, so a Bellman backup there keeps the external
    /// values admissible; the rollout applies one and samples a successor of
    /// the greedy action. It fails once `t_max` steps have been taken, at a
    /// state whose value exceeds the penalty, or at a state without actions.
    pub fn trial(&mut self, start: StateId, t_max: usize) -> TrialOutcome {
        let mut states = vec![start];
        let mut actions = Vec::new();
        let mut s = start;
        let mut t = 0usize;
        loop {
            let in_target = |this: &Self, x: StateId| x != start && (this.partial.contains(x) || this.ssp.is_goal(x));
            if s != start && in_target(self, s) {
                break;
            }
            if t >= t_max {
                return TrialOutcome::Failure;
            }
            if self.value(s) > self.penalty(s) {
                return TrialOutcome::Failure;
            }
            let cands = self.candidates(s);
            if cands.is_empty() {
                return TrialOutcome::Failure;
            }
            let reaching: Vec<ActionId> = cands
                .iter()
                .copied()
                .filter(|&a| self.ssp.action(a).successors().any(|x| in_target(self, x)))
                .collect();
            let (a, next) = if reaching.is_empty() {
                let qs = self.q_all(&cands);
                let g = Self::greedy_of(&qs).expect("non-empty");
                self.counters.backups += 1;
                self.v[s] = g.value;
                (g.action, self.sample(g.action))
            } else {
                let qs = self.q_all(&reaching);
                let g = Self::greedy_of(&qs).expect("non-empty");
                let next = self.ssp.action(g.action).successors().find(|&x| in_target(self, x)).expect("reaches");
                (g.action, next)
            };
            actions.push(a);
            states.push(next);
            s = next;
            t += 1;
        }
        let (states, actions) = remove_cycles(&states, &actions);
        let end = *states.last().expect("non-empty");
        TrialOutcome::Success { steps: states.into_iter().zip(actions).collect(), end }
    }

    fn sample(&mut self, a: ActionId) -> StateId {
        let act = self.ssp.action(a);
        let u: f64 = self.rng.gen();
        let mut acc = 0.0;
        for o in &act.outcomes {
            acc += o.prob;
            if u < acc {
                return o.target;
            }
        }
        act.outcomes.last().expect("validated").target
    }

    /// Expands the actions of a shortest plan from `s` to a goal.
    ///
    /// A most-likely-outcome search that finds nothing is retried on all
    /// outcomes. If that fails too, `s` is a dead end and only its give-up
    /// action is added.
    pub fn expand_plan(&mut self, s: StateId, mode: Determinization) -> Result<(), SolveError> {
        let allowed = |a: ActionId| !self.partial.is_eliminated(a);
        let mut plan = shortest_plan(self.ssp, s, mode, allowed);
        if plan.is_none() && mode == Determinization::MostLikely {
            plan = shortest_plan(self.ssp, s, Determinization::AllOutcomes, allowed);
        }
        let Some(plan) = plan else {
            let give_up = self.ssp.give_up_action(s).filter(|&a| !self.partial.is_eliminated(a));
            return match give_up {
                Some(a) => {
                    self.add(s, &[a])?;
                    self.policy.set(s, a);
                    Ok(())
                }
                None => Err(SolveError::DeadEnd(s)),
            };
        };
        for (x, a) in plan.steps {
            if self.partial.includes(a) {
                continue;
            }
            let was_internal = self.partial.is_internal(x);
            self.add(x, &[a])?;
            if !was_internal {
                self.policy.set(x, a);
            }
        }
        Ok(())
    }
}
