//! The explicit SSP data model and the fixed-penalty transform.
//!
//! An [`ExplicitSsp`] stores every state and every grounded action in dense
//! arrays. Action ids are assigned so that the actions of one state are
//! contiguous and appear in declaration order; the solvers break Q-value ties
//! towards the smallest id.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Dense index of a state in `[0, num_states)`.
pub type StateId = usize;

/// Dense index of a grounded action.
pub type ActionId = usize;

/// Tolerance on the sum of outcome probabilities.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Default cost of the give-up action added by [`apply_fixed_penalty`].
pub const DEFAULT_PENALTY: f64 = 500.0;

/// Name given to give-up actions.
pub const GIVE_UP_NAME: &str = "give-up";

/// One probabilistic effect of an action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    /// Successor state.
    pub target: StateId,
    /// Probability of reaching `target`.
    pub prob: f64,
}

/// A grounded action applicable at a single state.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundAction {
    /// Global action id.
    pub id: ActionId,
    /// State the action is applicable at.
    pub source: StateId,
    /// Human-readable name.
    pub name: String,
    /// Cost of applying the action.
    pub cost: f64,
    /// Successor distribution, in declaration order.
    pub outcomes: Vec<Outcome>,
    /// Whether this is a give-up action from the fixed-penalty transform.
    pub give_up: bool,
}

impl GroundAction {
    /// Iterates over the successor states in declaration order.
    pub fn successors(&self) -> impl Iterator<Item = StateId> + '_ {
        self.outcomes.iter().map(|o| o.target)
    }
}

/// A finite SSP with dense state and action indices.
#[derive(Debug, Clone)]
pub struct ExplicitSsp {
    num_states: usize,
    initial: StateId,
    goals: Vec<StateId>,
    is_goal: Vec<bool>,
    actions: Vec<GroundAction>,
    by_state: Vec<Vec<ActionId>>,
    labels: Option<Vec<String>>,
    heuristic_table: Option<Vec<f64>>,
    predecessors: OnceLock<Vec<Vec<(StateId, ActionId)>>>,
}

impl ExplicitSsp {
    /// Number of states.
    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// The initial state.
    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// Goal states in ascending order.
    pub fn goals(&self) -> &[StateId] {
        &self.goals
    }

    /// Whether `s` is a goal.
    pub fn is_goal(&self, s: StateId) -> bool {
        self.is_goal[s]
    }

    /// Total number of grounded actions, give-up actions included.
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// All grounded actions indexed by id.
    pub fn all_actions(&self) -> &[GroundAction] {
        &self.actions
    }

    /// The action with id `a`.
    pub fn action(&self, a: ActionId) -> &GroundAction {
        &self.actions[a]
    }

    /// Ids of the actions applicable at `s`, ascending.
    pub fn actions_of(&self, s: StateId) -> &[ActionId] {
        &self.by_state[s]
    }

    /// Number of actions at `s` that are not give-up actions.
    pub fn num_regular_actions(&self, s: StateId) -> usize {
        self.by_state[s].iter().filter(|&&a| !self.actions[a].give_up).count()
    }

    /// The give-up action at `s`, if the problem has been transformed.
    pub fn give_up_action(&self, s: StateId) -> Option<ActionId> {
        self.by_state[s].iter().copied().find(|&a| self.actions[a].give_up)
    }

    /// Whether every non-goal state carries a give-up action.
    pub fn has_give_up_everywhere(&self) -> bool {
        (0..self.num_states).all(|s| self.is_goal[s] || self.give_up_action(s).is_some())
    }

    /// Cost of the give-up action at `s`, if any.
    pub fn penalty_at(&self, s: StateId) -> Option<f64> {
        self.give_up_action(s).map(|a| self.actions[a].cost)
    }

    /// Optional state labels used in dumps and serialization.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `s`, falling back to `s<index>`.
    pub fn label(&self, s: StateId) -> String {
        match &self.labels {
            Some(l) => l[s].clone(),
            None => format!("s{s}"),
        }
    }

    /// Optional per-state heuristic values shipped with the problem.
    pub fn heuristic_table(&self) -> Option<&[f64]> {
        self.heuristic_table.as_deref()
    }

    /// Returns a copy with the heuristic table replaced.
    pub fn with_heuristic_table(mut self, table: Option<Vec<f64>>) -> Result<Self, ModelError> {
        if let Some(t) = &table {
            check_len("heuristic_table", t.len(), self.num_states)?;
        }
        self.heuristic_table = table;
        Ok(self)
    }

    /// Every `(predecessor, action)` pair with `s` among the action's successors.
    ///
    /// The reverse index is built on first use and cached.
    pub fn predecessors(&self, s: StateId) -> &[(StateId, ActionId)] {
        let index = self.predecessors.get_or_init(|| {
            let mut rev = vec![Vec::new(); self.num_states];
            for a in &self.actions {
                for o in &a.outcomes {
                    rev[o.target].push((a.source, a.id));
                }
            }
            rev
        });
        &index[s]
    }

    /// Checks that `s` is a valid state index.
    pub fn check_state(&self, s: StateId) -> Result<(), ModelError> {
        if s < self.num_states {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange { state: s, num_states: self.num_states })
        }
    }

    /// Checks that `a` exists and is applicable at `s`.
    pub fn check_applicable(&self, s: StateId, a: ActionId) -> Result<(), ModelError> {
        self.check_state(s)?;
        match self.actions.get(a) {
            None => Err(ModelError::UnknownAction(a)),
            Some(act) if act.source != s => Err(ModelError::NotApplicable { state: s, action: a }),
            Some(_) => Ok(()),
        }
    }
}

/// An action description used while building a problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    /// State the action is applicable at.
    pub source: StateId,
    /// Human-readable name.
    pub name: String,
    /// Cost of the action.
    pub cost: f64,
    /// Successor distribution.
    pub outcomes: Vec<Outcome>,
    /// Marks a give-up action.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub give_up: bool,
}

/// Incremental constructor for [`ExplicitSsp`] that validates on
/// [`build`](SspBuilder::build).
#[derive(Debug, Clone)]
pub struct SspBuilder {
    num_states: usize,
    initial: StateId,
    goals: Vec<StateId>,
    actions: Vec<ActionSpec>,
    labels: Option<Vec<String>>,
    heuristic_table: Option<Vec<f64>>,
    allow_zero_cost: bool,
}

impl SspBuilder {
    /// Starts a problem with `num_states` states and the given initial state.
    pub fn new(num_states: usize, initial: StateId) -> Self {
        SspBuilder {
            num_states,
            initial,
            goals: Vec::new(),
            actions: Vec::new(),
            labels: None,
            heuristic_table: None,
            allow_zero_cost: false,
        }
    }

    /// Declares `g` a goal.
    pub fn goal(mut self, g: StateId) -> Self {
        self.goals.push(g);
        self
    }

    /// Adds an action from a list of `(target, probability)` pairs.
    pub fn action(mut self, source: StateId, name: &str, cost: f64, outcomes: &[(StateId, f64)]) -> Self {
        self.push_action(source, name, cost, outcomes);
        self
    }

    /// Adds an action in place.
    pub fn push_action(&mut self, source: StateId, name: &str, cost: f64, outcomes: &[(StateId, f64)]) {
        self.actions.push(ActionSpec {
            source,
            name: name.to_string(),
            cost,
            outcomes: outcomes.iter().map(|&(target, prob)| Outcome { target, prob }).collect(),
            give_up: false,
        });
    }

    /// Adds a fully specified action.
    pub fn push_spec(&mut self, spec: ActionSpec) {
        self.actions.push(spec);
    }

    /// Attaches state labels.
    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Attaches a per-state heuristic table.
    pub fn heuristic_table(mut self, table: Vec<f64>) -> Self {
        self.heuristic_table = Some(table);
        self
    }

    /// Accepts zero-cost regular actions.
    pub fn allow_zero_cost(mut self, allow: bool) -> Self {
        self.allow_zero_cost = allow;
        self
    }

    /// Validates the description and assigns action ids.
    pub fn build(self) -> Result<ExplicitSsp, ModelError> {
        let n = self.num_states;
        let range = |s: StateId| {
            if s < n {
                Ok(())
            } else {
                Err(ModelError::StateOutOfRange { state: s, num_states: n })
            }
        };
        range(self.initial)?;
        if self.goals.is_empty() {
            return Err(ModelError::NoGoals);
        }
        let mut is_goal = vec![false; n];
        for &g in &self.goals {
            range(g)?;
            is_goal[g] = true;
        }
        if is_goal[self.initial] {
            return Err(ModelError::InitialIsGoal(self.initial));
        }
        let mut goals: Vec<StateId> = self.goals.clone();
        goals.sort_unstable();
        goals.dedup();
        if let Some(l) = &self.labels {
            check_len("state_labels", l.len(), n)?;
        }
        if let Some(t) = &self.heuristic_table {
            check_len("heuristic_table", t.len(), n)?;
        }

        for spec in &self.actions {
            validate_action(spec, n, &is_goal, self.allow_zero_cost)?;
        }

        let mut order: Vec<usize> = (0..self.actions.len()).collect();
        order.sort_by_key(|&i| self.actions[i].source);
        let mut actions = Vec::with_capacity(order.len());
        let mut by_state = vec![Vec::new(); n];
        for (id, i) in order.into_iter().enumerate() {
            let spec = &self.actions[i];
            by_state[spec.source].push(id);
            actions.push(GroundAction {
                id,
                source: spec.source,
                name: spec.name.clone(),
                cost: spec.cost,
                outcomes: spec.outcomes.clone(),
                give_up: spec.give_up,
            });
        }
        Ok(ExplicitSsp {
            num_states: n,
            initial: self.initial,
            goals,
            is_goal,
            actions,
            by_state,
            labels: self.labels,
            heuristic_table: self.heuristic_table,
            predecessors: OnceLock::new(),
        })
    }
}

fn check_len(what: &'static str, found: usize, expected: usize) -> Result<(), ModelError> {
    if found == expected {
        Ok(())
    } else {
        Err(ModelError::TableLength { what, found, expected })
    }
}

fn validate_action(spec: &ActionSpec, n: usize, is_goal: &[bool], allow_zero_cost: bool) -> Result<(), ModelError> {
    let range = |s: StateId| {
        if s < n {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange { state: s, num_states: n })
        }
    };
    range(spec.source)?;
    if is_goal[spec.source] {
        return Err(ModelError::GoalHasActions(spec.source));
    }
    let cost_ok = spec.cost.is_finite() && (spec.cost > 0.0 || (allow_zero_cost && !spec.give_up && spec.cost == 0.0));
    if !cost_ok {
        return Err(ModelError::InvalidCost { source_state: spec.source, name: spec.name.clone(), cost: spec.cost });
    }
    if spec.outcomes.is_empty() {
        return Err(ModelError::NoOutcomes { source_state: spec.source, name: spec.name.clone() });
    }
    let mut sum = 0.0;
    for (i, o) in spec.outcomes.iter().enumerate() {
        range(o.target)?;
        if !(o.prob > 0.0 && o.prob <= 1.0) {
            return Err(ModelError::InvalidProbability { source_state: spec.source, name: spec.name.clone(), prob: o.prob });
        }
        if spec.outcomes[..i].iter().any(|p| p.target == o.target) {
            return Err(ModelError::DuplicateTarget { source_state: spec.source, name: spec.name.clone(), target: o.target });
        }
        sum += o.prob;
    }
    if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(ModelError::ProbabilitySum { source_state: spec.source, name: spec.name.clone(), sum });
    }
    Ok(())
}

/// Reconstructs the builder description of a problem.
pub fn to_specs(ssp: &ExplicitSsp) -> Vec<ActionSpec> {
    ssp.actions
        .iter()
        .map(|a| ActionSpec {
            source: a.source,
            name: a.name.clone(),
            cost: a.cost,
            outcomes: a.outcomes.clone(),
            give_up: a.give_up,
        })
        .collect()
}

/// Adds a give-up action of cost `penalty` to every non-goal state.
///
/// Each give-up action leads deterministically to the first goal and is
/// appended after the state's regular actions, so it loses every Q-value tie.
/// States that already carry a give-up action are left unchanged.
///
/// ```
/// use ssp_cg::model::{apply_fixed_penalty, SspBuilder};
///
/// let ssp = SspBuilder::new(3, 0)
///     .goal(2)
///     .action(0, "go", 1.0, &[(1, 1.0)])
///     .build()
///     .unwrap();
/// let t = apply_fixed_penalty(&ssp, 500.0).unwrap();
/// assert_eq!(t.actions_of(1).len(), 1);
/// assert!(t.action(t.actions_of(1)[0]).give_up);
/// assert_eq!(t.actions_of(0).len(), 2);
/// ```
pub fn apply_fixed_penalty(ssp: &ExplicitSsp, penalty: f64) -> Result<ExplicitSsp, ModelError> {
    if !(penalty.is_finite() && penalty > 0.0) {
        return Err(ModelError::InvalidPenalty(penalty));
    }
    let target = ssp.goals[0];
    let mut b = SspBuilder::new(ssp.num_states, ssp.initial).allow_zero_cost(true);
    b.goals = ssp.goals.clone();
    b.labels = ssp.labels.clone();
    b.heuristic_table = ssp.heuristic_table.clone();
    for s in 0..ssp.num_states {
        for &a in &ssp.by_state[s] {
            let act = &ssp.actions[a];
            b.push_spec(ActionSpec {
                source: s,
                name: act.name.clone(),
                cost: act.cost,
                outcomes: act.outcomes.clone(),
                give_up: act.give_up,
            });
        }
        if !ssp.is_goal[s] && ssp.give_up_action(s).is_none() {
            b.push_spec(ActionSpec {
                source: s,
                name: GIVE_UP_NAME.to_string(),
                cost: penalty,
                outcomes: vec![Outcome { target, prob: 1.0 }],
                give_up: true,
            });
        }
    }
    b.build()
}
