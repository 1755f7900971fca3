//! The partial SSP grown by the heuristic-search solvers.
//!
//! A partial SSP keeps a subset `Ŝ` of the parent's states and, for each
//! internal state, a subset `Â(s)` of its actions. States of `Ŝ` are either
//! internal (expanded), artificial goals (unexpanded, terminating with their
//! current value) or true goals of the parent. Every successor of every
//! internal action is in `Ŝ`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::PartialError;
use crate::model::{ActionId, ExplicitSsp, StateId};
use crate::value::{PolicyMap, SspView};

/// Membership of a parent state in the partial problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateStatus {
    /// Not in `Ŝ`.
    External,
    /// Expanded: in `Ŝ` and not terminal.
    Internal,
    /// Unexpanded member of `Ŝ`, terminal with its current value.
    Artificial,
    /// A goal of the parent problem that has entered `Ŝ`.
    Goal,
}

/// The (state, action) pairs whose constraints may be violated.
pub type ViolationSet = BTreeSet<(StateId, ActionId)>;

/// Sizes reported for a partial problem. Give-up actions are not counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct PartialSizes {
    /// `|Ŝ|`.
    pub states: usize,
    /// `Σ_s |Â(s)|` over internal states.
    pub actions: usize,
    /// `Σ_s |A(s)|` over internal states.
    pub actions_max: usize,
}

/// The growing sub-problem `⟨Ŝ, s0, Ĝ, Â⟩`.
#[derive(Debug, Clone)]
pub struct PartialSsp {
    initial: StateId,
    status: Vec<StateStatus>,
    actions: Vec<Vec<ActionId>>,
    included: Vec<bool>,
    eliminated: Vec<bool>,
    members: usize,
    goals_seen: usize,
}

impl PartialSsp {
    /// The initial partial problem: only `s0`, as an artificial goal.
    pub fn new(ssp: &ExplicitSsp) -> Self {
        let mut status = vec![StateStatus::External; ssp.num_states()];
        status[ssp.initial()] = StateStatus::Artificial;
        PartialSsp {
            initial: ssp.initial(),
            status,
            actions: vec![Vec::new(); ssp.num_states()],
            included: vec![false; ssp.num_actions()],
            eliminated: vec![false; ssp.num_actions()],
            members: 1,
            goals_seen: 0,
        }
    }

    /// The initial state.
    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// Membership of `s`.
    pub fn status(&self, s: StateId) -> StateStatus {
        self.status[s]
    }

    /// Whether `s` is in `Ŝ`.
    pub fn contains(&self, s: StateId) -> bool {
        self.status[s] != StateStatus::External
    }

    /// Whether `s` is internal.
    pub fn is_internal(&self, s: StateId) -> bool {
        self.status[s] == StateStatus::Internal
    }

    /// Whether `s` is an artificial goal.
    pub fn is_artificial(&self, s: StateId) -> bool {
        self.status[s] == StateStatus::Artificial
    }

    /// Whether `s` is terminal in the partial problem.
    pub fn is_terminal(&self, s: StateId) -> bool {
        !self.is_internal(s)
    }

    /// `|Ŝ|`.
    pub fn num_states(&self) -> usize {
        self.members
    }

    /// Whether at least one true goal has entered `Ŝ`.
    pub fn has_true_goal(&self) -> bool {
        self.goals_seen > 0
    }

    /// Internal states in ascending order.
    pub fn internal_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states_with(StateStatus::Internal)
    }

    /// Artificial goals in ascending order.
    pub fn artificial_goals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states_with(StateStatus::Artificial)
    }

    /// True goals in `Ŝ` in ascending order.
    pub fn goals_seen(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states_with(StateStatus::Goal)
    }

    fn states_with(&self, st: StateStatus) -> impl Iterator<Item = StateId> + '_ {
        self.status.iter().enumerate().filter(move |(_, &x)| x == st).map(|(s, _)| s)
    }

    /// `Â(s)` in ascending id order.
    pub fn actions(&self, s: StateId) -> &[ActionId] {
        &self.actions[s]
    }

    /// Whether `a` is in `Â`.
    pub fn includes(&self, a: ActionId) -> bool {
        self.included[a]
    }

    /// Whether `a` has been removed by action elimination.
    pub fn is_eliminated(&self, a: ActionId) -> bool {
        self.eliminated[a]
    }

    /// Merges `acts` into `Â(s)` and makes `s` internal.
    ///
    /// Successors that are not yet in `Ŝ` join it as artificial goals, or as
    /// true goals if the parent says so. Returns the states added to `Ŝ`,
    /// including `s` itself if it was external.
    pub fn add_actions(&mut self, ssp: &ExplicitSsp, s: StateId, acts: &[ActionId]) -> Result<Vec<StateId>, PartialError> {
        ssp.check_state(s)?;
        if ssp.is_goal(s) {
            return Err(PartialError::ExpandGoal(s));
        }
        for &a in acts {
            ssp.check_applicable(s, a)?;
            if self.included[a] {
                return Err(PartialError::AlreadyPresent { state: s, action: a });
            }
        }
        let mut added = Vec::new();
        if self.status[s] == StateStatus::External {
            self.members += 1;
            added.push(s);
        }
        self.status[s] = StateStatus::Internal;
        for &a in acts {
            self.included[a] = true;
            self.actions[s].push(a);
            for t in ssp.action(a).successors() {
                if self.status[t] == StateStatus::External {
                    self.members += 1;
                    if ssp.is_goal(t) {
                        self.status[t] = StateStatus::Goal;
                        self.goals_seen += 1;
                    } else {
                        self.status[t] = StateStatus::Artificial;
                    }
                    added.push(t);
                }
            }
        }
        self.actions[s].sort_unstable();
        debug_assert!(acts.iter().all(|&a| ssp.action(a).successors().all(|t| self.contains(t))));
        Ok(added)
    }

    /// Permanently removes `a` from `Â(s)` and from every future candidate set.
    pub fn eliminate(&mut self, s: StateId, a: ActionId) {
        self.eliminated[a] = true;
        if self.included[a] {
            self.included[a] = false;
            self.actions[s].retain(|&b| b != a);
        }
    }

    /// `{(s, a) : a ∈ A(s) \ Â(s)}` in ascending action order, skipping
    /// eliminated actions.
    pub fn ext_succs(&self, ssp: &ExplicitSsp, s: StateId) -> Vec<(StateId, ActionId)> {
        ssp.actions_of(s)
            .iter()
            .filter(|&&a| !self.included[a] && !self.eliminated[a])
            .map(|&a| (s, a))
            .collect()
    }

    /// Every `(s', a')` with `s'` internal and `s` a successor of `a'`,
    /// skipping eliminated actions. Ascending and deduplicated.
    pub fn preds(&self, ssp: &ExplicitSsp, s: StateId) -> Vec<(StateId, ActionId)> {
        let mut out: Vec<(StateId, ActionId)> = ssp
            .predecessors(s)
            .iter()
            .copied()
            .filter(|&(p, a)| self.is_internal(p) && !self.eliminated[a])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Artificial goals among `envelope`, in envelope order.
    pub fn fringe_states(&self, envelope: &[StateId]) -> Vec<StateId> {
        envelope.iter().copied().filter(|&s| self.is_artificial(s)).collect()
    }

    /// Sizes with give-up actions excluded.
    pub fn sizes(&self, ssp: &ExplicitSsp) -> PartialSizes {
        let mut sizes = PartialSizes { states: self.members, ..PartialSizes::default() };
        for s in self.internal_states() {
            sizes.actions += self.actions[s].iter().filter(|&&a| !ssp.action(a).give_up).count();
            sizes.actions_max += ssp.num_regular_actions(s);
        }
        sizes
    }

    /// A view of this partial problem over its parent.
    pub fn view<'a>(&'a self, ssp: &'a ExplicitSsp) -> PartialView<'a> {
        PartialView { ssp, partial: self }
    }

    /// Checks that every successor of every internal action is in `Ŝ`.
    pub fn closed(&self, ssp: &ExplicitSsp) -> bool {
        self.internal_states()
            .all(|s| self.actions[s].iter().all(|&a| ssp.action(a).successors().all(|t| self.contains(t))))
    }

    /// Text adjacency listing.
    ///
    /// One line per state of `Ŝ`, tagged `I` (internal), `A` (artificial
    /// goal) or `G` (true goal), followed for internal states by one indented
    /// line per action of `Â(s)`.
    pub fn dump(&self, ssp: &ExplicitSsp) -> String {
        let mut out = String::new();
        let internal = self.internal_states().count();
        let artificial = self.artificial_goals().count();
        let _ = writeln!(
            out,
            "# partial ssp: states={} internal={} artificial={} goals={}",
            self.members, internal, artificial, self.goals_seen
        );
        for s in 0..ssp.num_states() {
            let tag = match self.status[s] {
                StateStatus::External => continue,
                StateStatus::Internal => 'I',
                StateStatus::Artificial => 'A',
                StateStatus::Goal => 'G',
            };
            let _ = writeln!(out, "{tag} {s} {}", ssp.label(s));
            for &a in &self.actions[s] {
                let act = ssp.action(a);
                let succ: Vec<String> = act.outcomes.iter().map(|o| format!("{}:{}", o.target, o.prob)).collect();
                let _ = writeln!(out, "  {a} {} cost={} -> {}", act.name, act.cost, succ.join(" "));
            }
        }
        out
    }
}

/// A partial problem seen as an SSP with terminal costs.
#[derive(Debug, Clone, Copy)]
pub struct PartialView<'a> {
    ssp: &'a ExplicitSsp,
    partial: &'a PartialSsp,
}

impl<'a> PartialView<'a> {
    /// The partial problem.
    pub fn partial(&self) -> &'a PartialSsp {
        self.partial
    }
}

impl SspView for PartialView<'_> {
    fn parent(&self) -> &ExplicitSsp {
        self.ssp
    }
    fn is_terminal(&self, s: StateId) -> bool {
        self.partial.is_terminal(s)
    }
    fn available(&self, s: StateId) -> &[ActionId] {
        self.partial.actions(s)
    }
}

/// Post-order DFS of `policy` over the partial problem from `roots`.
pub fn dfs_postorder(ssp: &ExplicitSsp, partial: &PartialSsp, policy: &PolicyMap, roots: &[StateId]) -> Vec<StateId> {
    crate::value::dfs_postorder(&partial.view(ssp), policy, roots)
}
