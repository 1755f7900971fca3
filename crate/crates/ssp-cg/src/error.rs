//! Error types shared by the model, the solvers and the codecs.

use thiserror::Error;

use crate::model::{ActionId, StateId};

/// Structural problems with an SSP or with a query against one.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// The problem declares no goal state.
    #[error("the problem has no goal state")]
    NoGoals,
    /// The initial state is itself a goal.
    #[error("initial state {0} is a goal")]
    InitialIsGoal(StateId),
    /// A state index is outside `[0, num_states)`.
    #[error("state {state} is out of range (num_states = {num_states})")]
    StateOutOfRange { state: StateId, num_states: usize },
    /// An action index does not exist.
    #[error("action {0} does not exist")]
    UnknownAction(ActionId),
    /// An action was queried at a state where it is not applicable.
    #[error("action {action} is not applicable at state {state}")]
    NotApplicable { state: StateId, action: ActionId },
    /// An action has no outcomes.
    #[error("action {name:?} at state {source_state} has no outcomes")]
    NoOutcomes { source_state: StateId, name: String },
    /// Outcome probabilities do not sum to one.
    #[error("outcome probabilities of action {name:?} at state {source_state} sum to {sum}")]
    ProbabilitySum { source_state: StateId, name: String, sum: f64 },
    /// An outcome probability lies outside `(0, 1]`.
    #[error("action {name:?} at state {source_state} has probability {prob} outside (0, 1]")]
    InvalidProbability { source_state: StateId, name: String, prob: f64 },
    /// Two outcomes of the same action share a target.
    #[error("action {name:?} at state {source_state} lists target {target} twice")]
    DuplicateTarget { source_state: StateId, name: String, target: StateId },
    /// A cost is not strictly positive and finite.
    #[error("action {name:?} at state {source_state} has cost {cost}, expected a finite positive value")]
    InvalidCost { source_state: StateId, name: String, cost: f64 },
    /// Goals are absorbing and may not carry actions.
    #[error("goal state {0} has outgoing actions")]
    GoalHasActions(StateId),
    /// A per-state side table has the wrong length.
    #[error("{what} has {found} entries, expected {expected}")]
    TableLength { what: &'static str, found: usize, expected: usize },
    /// A Bellman backup or greedy query was made at a terminal state.
    #[error("state {0} is terminal and cannot be backed up")]
    TerminalState(StateId),
    /// A non-terminal state has no applicable action.
    #[error("state {0} has no applicable action (apply the fixed-penalty transform first)")]
    ImproperState(StateId),
    /// The fixed-penalty constant must be positive.
    #[error("penalty {0} must be finite and positive")]
    InvalidPenalty(f64),
}

/// Misuse of a partial SSP.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartialError {
    /// True goals are never expanded.
    #[error("state {0} is a goal of the parent problem and cannot be expanded")]
    ExpandGoal(StateId),
    /// The action is already part of the partial problem.
    #[error("action {action} is already in the partial problem at state {state}")]
    AlreadyPresent { state: StateId, action: ActionId },
    /// Underlying structural error.
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failures reported by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    /// The iteration guard was hit before convergence.
    #[error("no convergence within {0} backup sweeps")]
    NonConvergence(u64),
    /// The wall-clock budget ran out.
    #[error("time budget exhausted after {0} backup sweeps")]
    Timeout(u64),
    /// The configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// A state reachable from the initial state cannot reach any goal.
    #[error("state {0} is a dead end and the problem has no give-up action")]
    DeadEnd(StateId),
    /// An invariant of the algorithm was broken.
    #[error("internal error: {0}")]
    Internal(String),
    /// Underlying structural error.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// Underlying partial-problem error.
    #[error(transparent)]
    Partial(#[from] PartialError),
}

/// Failures while reading or writing problem files.
#[derive(Debug, Error)]
pub enum IoError {
    /// The file could not be read or written.
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// The JSON is malformed or does not match the schema.
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    /// The JSON parsed but describes an invalid problem.
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: ModelError,
    },
    /// An LP file could not be parsed.
    #[error("line {line}: {message}")]
    Lp { line: usize, message: String },
}
