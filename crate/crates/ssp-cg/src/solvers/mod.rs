//! Value iteration, iLAO* and CG-iLAO*.
//!
//! [`vi_solve`] sweeps the whole state space. [`ilao_solve`] grows a partial
//! problem by expanding every action of each fringe state it reaches.
//! [`cgilao_solve`] expands fringes partially, tracks the constraints that
//! value changes may have violated, and repairs them by adding the missing
//! actions.

mod cgilao;
mod elimination;
mod expansion;
mod ilao;
mod search;
pub mod vi;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use cgilao::{cgilao_solve, cgilao_solve_observed};
pub use elimination::eliminate_actions;
pub use expansion::{remove_cycles, TrialOutcome};
pub use ilao::{ilao_solve, ilao_solve_observed};
pub use vi::{vi_solve, vi_solve_with, ViMode};

use crate::model::{ActionId, ExplicitSsp, StateId, DEFAULT_PENALTY};
use crate::partial::{PartialSizes, PartialSsp, ViolationSet};
use crate::value::{Counters, PolicyMap, ValueFunction};

/// How a fringe state is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expansion {
    /// Every applicable action.
    All,
    /// Every action whose Q-value equals the minimum exactly.
    Tied,
    /// The single greedy action.
    Single,
    /// A greedy rollout whose actions are all added.
    Trial,
    /// A shortest plan in the all-outcomes determinisation.
    DetPlanAo,
    /// A shortest plan in the most-likely-outcome determinisation.
    DetPlanMlo,
}

impl Expansion {
    /// All strategies in a fixed order.
    pub const ALL: [Expansion; 6] =
        [Expansion::All, Expansion::Tied, Expansion::Single, Expansion::Trial, Expansion::DetPlanAo, Expansion::DetPlanMlo];

    /// The command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            Expansion::All => "all",
            Expansion::Tied => "tied",
            Expansion::Single => "single",
            Expansion::Trial => "trial",
            Expansion::DetPlanAo => "det-plan-ao",
            Expansion::DetPlanMlo => "det-plan-mlo",
        }
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Expansion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expansion::ALL
            .iter()
            .copied()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown expansion {s:?}"))
    }
}

/// Solver parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Residual tolerance of the termination test.
    pub epsilon: f64,
    /// Value changes at most this large are not tracked by CG-iLAO*.
    pub eta: f64,
    /// Fringe expansion strategy (CG-iLAO* only).
    pub expansion: Expansion,
    /// Step budget of a trial rollout.
    pub t_max: usize,
    /// Enables action elimination with a parallel upper bound.
    pub elim: bool,
    /// Seed of the rollout generator.
    pub seed: u64,
    /// Maximum number of backup sweeps.
    pub max_iterations: u64,
    /// Penalty `D` used for the trivial upper bound and rollout cut-off when
    /// the problem carries no give-up action.
    pub penalty: f64,
    /// Wall-clock deadline polled once per sweep.
    pub deadline: Option<Instant>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-4,
            eta: 1e-4,
            expansion: Expansion::Tied,
            t_max: 100,
            elim: false,
            seed: 0,
            max_iterations: 10_000_000,
            penalty: DEFAULT_PENALTY,
            deadline: None,
        }
    }
}

impl SolverConfig {
    /// Default configuration with `ε = η = epsilon`.
    pub fn with_epsilon(epsilon: f64) -> Self {
        SolverConfig { epsilon, eta: epsilon, ..SolverConfig::default() }
    }

    /// Returns the configuration with a different expansion.
    pub fn expansion(mut self, e: Expansion) -> Self {
        self.expansion = e;
        self
    }

    /// Returns the configuration with a different `η`.
    pub fn eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// Returns the configuration with elimination switched on or off.
    pub fn elim(mut self, on: bool) -> Self {
        self.elim = on;
        self
    }

    /// Returns the configuration with a different seed.
    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub(crate) fn validate(&self) -> Result<(), crate::error::SolveError> {
        let bad = |m: &str| Err(crate::error::SolveError::InvalidConfig(m.to_string()));
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return bad("eta must be non-negative");
        }
        if !(self.penalty.is_finite() && self.penalty > 0.0) {
            return bad("penalty must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        Ok(())
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `V(s0)`.
    pub value_at_initial: f64,
    /// Final values; states never touched hold their heuristic value.
    pub value_function: ValueFunction,
    /// Greedy policy restricted to the states it reaches from `s0`.
    pub policy: PolicyMap,
    /// Instrumentation tallies.
    pub counters: Counters,
    /// `|Ŝ|`, `|Â|` and `|Â_max|`, give-up actions excluded.
    pub partial_sizes: PartialSizes,
    /// Main-loop iterations (sweeps for value iteration).
    pub iterations: u64,
    /// Backup sweeps performed.
    pub sweeps: u64,
    /// Value decreases larger than `η`, including repairs.
    pub value_decrease_events: u64,
    /// Value increases larger than `η`.
    pub value_increase_events: u64,
    /// Whether the final values are ε-consistent on the solver's own problem.
    pub terminated_econsistent_on_partial: bool,
    /// The final partial problem (heuristic-search solvers only).
    pub partial: Option<PartialSsp>,
    /// Actions removed by elimination, in removal order.
    pub eliminated: Vec<(StateId, ActionId)>,
}

/// State of a heuristic-search solver at the end of a main-loop iteration.
pub struct IterationView<'a> {
    /// 1-based iteration number.
    pub iteration: u64,
    /// The parent problem.
    pub ssp: &'a ExplicitSsp,
    /// The partial problem.
    pub partial: &'a PartialSsp,
    /// Current values; entries with `touched[s] == false` are unset.
    pub values: &'a [f64],
    /// Which entries of `values` are set.
    pub touched: &'a [bool],
    /// The heuristic used for unset entries.
    pub heuristic: &'a crate::heuristics::Heuristic,
    /// The candidate policy.
    pub policy: &'a PolicyMap,
    /// The violation set `Γ` (always empty for iLAO*).
    pub gamma: &'a ViolationSet,
    /// Residual reported by the iteration.
    pub residual: f64,
}

impl IterationView<'_> {
    /// `V(s)`, falling back to the heuristic for unset entries.
    pub fn value(&self, s: StateId) -> f64 {
        if self.ssp.is_goal(s) {
            0.0
        } else if self.touched[s] {
            self.values[s]
        } else {
            self.heuristic.value(s)
        }
    }

    /// `Q(s, a)` under [`value`](Self::value).
    pub fn q(&self, a: ActionId) -> f64 {
        let act = self.ssp.action(a);
        act.cost + act.outcomes.iter().map(|o| o.prob * self.value(o.target)).sum::<f64>()
    }
}

/// Hooks into a heuristic-search solve, used by tests and tracing.
pub trait SolveObserver {
    /// Called after every main-loop iteration.
    fn iteration_end(&mut self, _view: &IterationView<'_>) {}
    /// Called when a state becomes internal.
    fn expanded(&mut self, _state: StateId) {}
    /// Called when elimination runs at `state`; `gamma_len` is `|Γ|` at that moment.
    fn elimination(&mut self, _state: StateId, _gamma_len: usize) {}
}

/// Observer that does nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl SolveObserver for NoObserver {}

/// Solver family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Asynchronous value iteration.
    Vi,
    /// iLAO*.
    Ilao,
    /// CG-iLAO*.
    CgIlao,
}

impl SolverKind {
    /// The command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Vi => "vi",
            SolverKind::Ilao => "ilao",
            SolverKind::CgIlao => "cgilao",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vi" => Ok(SolverKind::Vi),
            "ilao" => Ok(SolverKind::Ilao),
            "cgilao" => Ok(SolverKind::CgIlao),
            _ => Err(format!("unknown solver {s:?}")),
        }
    }
}

/// Runs the selected solver.
pub fn solve(
    kind: SolverKind,
    ssp: &ExplicitSsp,
    h: &crate::heuristics::Heuristic,
    config: &SolverConfig,
) -> Result<SolveResult, crate::error::SolveError> {
    match kind {
        SolverKind::Vi => vi_solve_with(ssp, config, ViMode::Async),
        SolverKind::Ilao => ilao_solve(ssp, h, config),
        SolverKind::CgIlao => cgilao_solve(ssp, h, config),
    }
}
