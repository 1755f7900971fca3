//! Shortest paths on deterministic relaxations of an SSP.
//!
//! The all-outcomes determinisation turns every outcome of every action into
//! a deterministic edge with the action's cost. The most-likely-outcome
//! determinisation keeps one edge per action, towards its most probable
//! outcome (the first declared one among equally probable outcomes).
//! Give-up actions are never part of a determinisation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::model::{ActionId, ExplicitSsp, StateId};

/// Which deterministic relaxation to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determinization {
    /// One edge per outcome.
    AllOutcomes,
    /// One edge per action, to its most likely outcome.
    MostLikely,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    state: StateId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.state.cmp(&self.state))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Index of the most likely outcome of `a`.
pub fn most_likely_outcome(ssp: &ExplicitSsp, a: ActionId) -> StateId {
    let act = ssp.action(a);
    let mut best = act.outcomes[0];
    for o in &act.outcomes[1..] {
        if o.prob > best.prob {
            best = *o;
        }
    }
    best.target
}

/// Cost of the cheapest all-outcomes path from every state to a goal, using
/// only regular (non give-up) actions. Unreachable states get `f64::INFINITY`.
pub fn goal_distances(ssp: &ExplicitSsp) -> Vec<f64> {
    let n = ssp.num_states();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for &g in ssp.goals() {
        dist[g] = 0.0;
        heap.push(Entry { dist: 0.0, state: g });
    }
    while let Some(Entry { dist: d, state: t }) = heap.pop() {
        if d > dist[t] {
            continue;
        }
        for &(s, a) in ssp.predecessors(t) {
            let act = ssp.action(a);
            if act.give_up {
                continue;
            }
            let nd = d + act.cost;
            if nd < dist[s] {
                dist[s] = nd;
                heap.push(Entry { dist: nd, state: s });
            }
        }
    }
    dist
}

/// A deterministic plan `s_0 -a_0-> s_1 -a_1-> ... -> s_n` ending at a goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    /// The `(s_i, a_i)` steps in order.
    pub steps: Vec<(StateId, ActionId)>,
    /// The goal reached.
    pub goal: StateId,
    /// Total cost of the plan.
    pub cost: f64,
}

/// Cheapest plan from `start` to any goal in the chosen determinisation.
///
/// `allowed` filters the actions that may be used. Returns `None` when no
/// goal is reachable, which for [`Determinization::AllOutcomes`] proves that
/// `start` is a dead end of the regular actions.
pub fn shortest_plan(
    ssp: &ExplicitSsp,
    start: StateId,
    mode: Determinization,
    allowed: impl Fn(ActionId) -> bool,
) -> Option<Plan> {
    let n = ssp.num_states();
    let mut dist = vec![f64::INFINITY; n];
    let mut via: Vec<Option<(StateId, ActionId)>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(Entry { dist: 0.0, state: start });
    let mut reached = None;
    while let Some(Entry { dist: d, state: s }) = heap.pop() {
        if d > dist[s] {
            continue;
        }
        if ssp.is_goal(s) {
            reached = Some(s);
            break;
        }
        for &a in ssp.actions_of(s) {
            let act = ssp.action(a);
            if act.give_up || !allowed(a) {
                continue;
            }
            let nd = d + act.cost;
            let mut relax = |t: StateId| {
                if nd < dist[t] {
                    dist[t] = nd;
                    via[t] = Some((s, a));
                    heap.push(Entry { dist: nd, state: t });
                }
            };
            match mode {
                Determinization::AllOutcomes => act.successors().for_each(&mut relax),
                Determinization::MostLikely => relax(most_likely_outcome(ssp, a)),
            }
        }
    }
    let goal = reached?;
    let mut steps = Vec::new();
    let mut cur = goal;
    while let Some((p, a)) = via[cur] {
        steps.push((p, a));
        cur = p;
    }
    steps.reverse();
    Some(Plan { steps, goal, cost: dist[goal] })
}
