//! Value functions, policies, Q-values, Bellman backups and ε-consistency.
//!
//! Every operation works through [`SspView`], which is implemented both by a
//! full [`ExplicitSsp`] and by a [`PartialView`](crate::partial::PartialView).
//! In a full problem the terminal states are the goals and every action is
//! available; in a partial problem artificial goals are terminal too and only
//! the actions of the partial problem are available.

use serde::Serialize;

use crate::error::ModelError;
use crate::model::{ActionId, ExplicitSsp, StateId};

/// A problem seen by a Bellman backup: a parent SSP plus a choice of terminal
/// states and available actions.
pub trait SspView {
    /// The underlying explicit problem.
    fn parent(&self) -> &ExplicitSsp;
    /// Whether `s` is terminal in this view.
    fn is_terminal(&self, s: StateId) -> bool;
    /// Actions available at `s` in this view, in ascending id order.
    fn available(&self, s: StateId) -> &[ActionId];
}

impl SspView for ExplicitSsp {
    fn parent(&self) -> &ExplicitSsp {
        self
    }
    fn is_terminal(&self, s: StateId) -> bool {
        self.is_goal(s)
    }
    fn available(&self, s: StateId) -> &[ActionId] {
        self.actions_of(s)
    }
}

/// Dense map from states to cost-to-go estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunction {
    values: Vec<f64>,
}

impl ValueFunction {
    /// All-zero value function for `n` states.
    pub fn zeros(n: usize) -> Self {
        ValueFunction { values: vec![0.0; n] }
    }

    /// Wraps explicit values.
    pub fn from_vec(values: Vec<f64>) -> Self {
        ValueFunction { values }
    }

    /// Value of `s`.
    pub fn get(&self, s: StateId) -> f64 {
        self.values[s]
    }

    /// Overwrites the value of `s`.
    pub fn set(&mut self, s: StateId, v: f64) {
        self.values[s] = v;
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Whether the function has no entries.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Borrowed values.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// A possibly partial map from states to actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyMap {
    choice: Vec<Option<ActionId>>,
}

impl PolicyMap {
    /// An empty policy over `n` states.
    pub fn empty(n: usize) -> Self {
        PolicyMap { choice: vec![None; n] }
    }

    /// Action chosen at `s`, if any.
    pub fn get(&self, s: StateId) -> Option<ActionId> {
        self.choice[s]
    }

    /// Chooses `a` at `s`.
    pub fn set(&mut self, s: StateId, a: ActionId) {
        self.choice[s] = Some(a);
    }

    /// Removes the choice at `s`.
    pub fn clear(&mut self, s: StateId) {
        self.choice[s] = None;
    }

    /// Number of states with a choice.
    pub fn len(&self) -> usize {
        self.choice.iter().filter(|c| c.is_some()).count()
    }

    /// Whether no state has a choice.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(state, action)` pairs in ascending state order.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, ActionId)> + '_ {
        self.choice.iter().enumerate().filter_map(|(s, c)| c.map(|a| (s, a)))
    }
}

/// Instrumentation tallies. Every field only grows during a solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Q-value evaluations, lower and upper bound alike.
    pub q_values: u64,
    /// States whose heuristic value was requested.
    pub heuristic_calls: u64,
    /// Bellman backups applied.
    pub backups: u64,
    /// States that became internal.
    pub expansions: u64,
    /// Candidate constraints examined by the repair step.
    pub constraints_checked: u64,
    /// Actions added to the partial problem by the repair step.
    pub constraints_added: u64,
    /// Actions removed by action elimination.
    pub actions_eliminated: u64,
}

/// Result of a Bellman backup at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backup {
    /// The minimal Q-value, now stored in the value function.
    pub value: f64,
    /// `|V_old(s) - value|`.
    pub residual: f64,
    /// The greedy action under smallest-id tie-breaking.
    pub action: ActionId,
}

/// Greedy choice at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Greedy {
    /// Minimal-Q action, ties broken towards the smallest id.
    pub action: ActionId,
    /// Its Q-value.
    pub value: f64,
}

pub(crate) fn q_raw(ssp: &ExplicitSsp, v: &[f64], a: ActionId, counters: &mut Counters) -> f64 {
    counters.q_values += 1;
    let act = ssp.action(a);
    let mut expected = 0.0;
    for o in &act.outcomes {
        expected += o.prob * v[o.target];
    }
    act.cost + expected
}

pub(crate) fn greedy_raw(ssp: &ExplicitSsp, v: &[f64], actions: &[ActionId], counters: &mut Counters) -> Option<Greedy> {
    let mut best: Option<Greedy> = None;
    for &a in actions {
        let q = q_raw(ssp, v, a, counters);
        if best.is_none_or(|b| q < b.value) {
            best = Some(Greedy { action: a, value: q });
        }
    }
    best
}

/// `Q(s, a) = C(s, a) + Σ P(s'|s, a) V(s')`.
///
/// ```
/// use ssp_cg::model::SspBuilder;
/// use ssp_cg::value::{q_value, Counters, ValueFunction};
///
/// let ssp = SspBuilder::new(2, 0).goal(1).action(0, "go", 5.0, &[(1, 1.0)]).build().unwrap();
/// let mut c = Counters::default();
/// let q = q_value(&ssp, &ValueFunction::zeros(2), 0, 0, &mut c).unwrap();
/// assert_eq!(q, 5.0);
/// assert_eq!(c.q_values, 1);
/// ```
pub fn q_value<V: SspView + ?Sized>(
    view: &V,
    v: &ValueFunction,
    s: StateId,
    a: ActionId,
    counters: &mut Counters,
) -> Result<f64, ModelError> {
    let ssp = view.parent();
    ssp.check_applicable(s, a)?;
    if v.len() != ssp.num_states() {
        return Err(ModelError::TableLength { what: "value function", found: v.len(), expected: ssp.num_states() });
    }
    Ok(q_raw(ssp, v.as_slice(), a, counters))
}

/// The minimal-Q action available at `s`, ties broken towards the smallest id.
pub fn greedy_action<V: SspView + ?Sized>(
    view: &V,
    v: &ValueFunction,
    s: StateId,
    counters: &mut Counters,
) -> Result<Greedy, ModelError> {
    let ssp = view.parent();
    ssp.check_state(s)?;
    if view.is_terminal(s) {
        return Err(ModelError::TerminalState(s));
    }
    greedy_raw(ssp, v.as_slice(), view.available(s), counters).ok_or(ModelError::ImproperState(s))
}

/// Sets `V(s)` to the minimal Q-value and reports the residual.
pub fn bellman_backup<V: SspView + ?Sized>(
    view: &V,
    v: &mut ValueFunction,
    s: StateId,
    counters: &mut Counters,
) -> Result<Backup, ModelError> {
    let g = greedy_action(view, v, s, counters)?;
    counters.backups += 1;
    let residual = (v.get(s) - g.value).abs();
    v.set(s, g.value);
    Ok(Backup { value: g.value, residual, action: g.action })
}

/// `|V(s) - min_a Q(s, a)|` without modifying `V`; zero at terminal states.
pub fn residual<V: SspView + ?Sized>(view: &V, v: &ValueFunction, s: StateId) -> Result<f64, ModelError> {
    if view.is_terminal(s) {
        return Ok(0.0);
    }
    let mut scratch = Counters::default();
    let g = greedy_action(view, v, s, &mut scratch)?;
    Ok((v.get(s) - g.value).abs())
}

/// Whether every non-terminal state has residual at most `epsilon`.
pub fn check_global_econsistency<V: SspView + ?Sized>(view: &V, v: &ValueFunction, epsilon: f64) -> bool {
    let n = view.parent().num_states();
    (0..n).all(|s| residual(view, v, s).is_ok_and(|r| r <= epsilon))
}

/// Whether every state on the greedy envelope from the initial state has
/// residual at most `epsilon`.
///
/// The greedy policy is recomputed from `v` with smallest-id tie-breaking.
pub fn check_econsistency<V: SspView + ?Sized>(view: &V, v: &ValueFunction, epsilon: f64) -> bool {
    let ssp = view.parent();
    let mut scratch = Counters::default();
    let mut seen = vec![false; ssp.num_states()];
    let mut stack = vec![ssp.initial()];
    seen[ssp.initial()] = true;
    while let Some(s) = stack.pop() {
        if view.is_terminal(s) {
            continue;
        }
        let Some(g) = greedy_raw(ssp, v.as_slice(), view.available(s), &mut scratch) else {
            return false;
        };
        if (v.get(s) - g.value).abs() > epsilon {
            return false;
        }
        for t in ssp.action(g.action).successors() {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    true
}

/// Greedy policy of `v` on every non-terminal state of the view.
pub fn greedy_policy<V: SspView + ?Sized>(view: &V, v: &ValueFunction) -> PolicyMap {
    let ssp = view.parent();
    let mut scratch = Counters::default();
    let mut pi = PolicyMap::empty(ssp.num_states());
    for s in 0..ssp.num_states() {
        if view.is_terminal(s) {
            continue;
        }
        if let Some(g) = greedy_raw(ssp, v.as_slice(), view.available(s), &mut scratch) {
            pi.set(s, g.action);
        }
    }
    pi
}

/// States reachable from `roots` by following `policy` in the view.
///
/// The result is a post-order: every state appears after the states it leads
/// to, except along cycles. Children are visited in outcome-declaration order
/// and each state is listed once. Terminal states and states without a policy
/// choice are leaves.
pub fn dfs_postorder<V: SspView + ?Sized>(view: &V, policy: &PolicyMap, roots: &[StateId]) -> Vec<StateId> {
    let mut seen = vec![false; view.parent().num_states()];
    let mut order = Vec::new();
    for &r in roots {
        dfs_from(view, policy, r, &mut seen, &mut order);
    }
    order
}

pub(crate) fn dfs_from<V: SspView + ?Sized>(
    view: &V,
    policy: &PolicyMap,
    root: StateId,
    seen: &mut [bool],
    order: &mut Vec<StateId>,
) {
    if seen[root] {
        return;
    }
    let ssp = view.parent();
    seen[root] = true;
    let mut stack: Vec<(StateId, usize)> = vec![(root, 0)];
    while let Some(&mut (s, ref mut next)) = stack.last_mut() {
        let child = if view.is_terminal(s) {
            None
        } else {
            policy.get(s).and_then(|a| ssp.action(a).outcomes.get(*next).map(|o| o.target))
        };
        match child {
            Some(t) => {
                *next += 1;
                if !seen[t] {
                    seen[t] = true;
                    stack.push((t, 0));
                }
            }
            None => {
                order.push(s);
                stack.pop();
            }
        }
    }
}
