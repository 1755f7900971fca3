//! Admissible heuristics for explicit SSPs.
//!
//! Every heuristic is tabulated when it is constructed, so evaluating it is a
//! lookup. Solvers count a heuristic call the first time they read the value
//! of a state.

use std::fmt;

use crate::determinize::goal_distances;
use crate::error::SolveError;
use crate::model::{ExplicitSsp, StateId};
use crate::solvers::vi::{vi_solve, ViMode};

/// Which heuristic a [`Heuristic`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    /// `h(s) = 0`.
    Zero,
    /// Cheapest all-outcomes path cost, capped by the give-up penalty.
    DetAllOutcomes,
    /// Optimal values from value iteration.
    Oracle,
    /// Explicit per-state values.
    Table,
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicKind::Zero => "zero",
            HeuristicKind::DetAllOutcomes => "det-ao",
            HeuristicKind::Oracle => "oracle",
            HeuristicKind::Table => "table",
        })
    }
}

impl std::str::FromStr for HeuristicKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(HeuristicKind::Zero),
            "det-ao" => Ok(HeuristicKind::DetAllOutcomes),
            "oracle" => Ok(HeuristicKind::Oracle),
            "table" => Ok(HeuristicKind::Table),
            _ => Err(format!("unknown heuristic {s:?}")),
        }
    }
}

/// Precision of the value iteration behind [`Heuristic::oracle`] when it is
/// built through [`Heuristic::build`].
pub const ORACLE_EPSILON: f64 = 1e-10;

/// A tabulated heuristic.
#[derive(Debug, Clone, PartialEq)]
pub struct Heuristic {
    kind: HeuristicKind,
    values: Option<Vec<f64>>,
    dead_ends: Vec<StateId>,
}

impl Heuristic {
    /// The zero heuristic.
    pub fn zero() -> Self {
        Heuristic { kind: HeuristicKind::Zero, values: None, dead_ends: Vec::new() }
    }

    /// Explicit values. States beyond the end of `values` get 0.
    pub fn table(values: Vec<f64>) -> Self {
        Heuristic { kind: HeuristicKind::Table, values: Some(values), dead_ends: Vec::new() }
    }

    /// The table shipped with the problem, if any.
    pub fn from_problem_table(ssp: &ExplicitSsp) -> Option<Self> {
        ssp.heuristic_table().map(|t| Heuristic::table(t.to_vec()))
    }

    /// Cheapest all-outcomes path cost to a goal.
    ///
    /// Only regular actions form the determinisation. A state that reaches
    /// no goal that way is flagged as a dead end and gets the cost of its
    /// give-up action; without one, construction fails.
    ///
    /// ```
    /// use ssp_cg::domains::figures::fig7;
    /// use ssp_cg::heuristics::Heuristic;
    ///
    /// let ssp = fig7();
    /// let h = Heuristic::det_ao(&ssp).unwrap();
    /// assert_eq!(h.value(ssp.initial()), 2.0);
    /// ```
    pub fn det_ao(ssp: &ExplicitSsp) -> Result<Self, SolveError> {
        let dist = goal_distances(ssp);
        let mut values = Vec::with_capacity(dist.len());
        let mut dead_ends = Vec::new();
        for (s, &d) in dist.iter().enumerate() {
            if d.is_infinite() {
                dead_ends.push(s);
            }
            let capped = match ssp.penalty_at(s) {
                Some(p) => d.min(p),
                None if d.is_finite() => d,
                None => return Err(SolveError::DeadEnd(s)),
            };
            values.push(capped);
        }
        Ok(Heuristic { kind: HeuristicKind::DetAllOutcomes, values: Some(values), dead_ends })
    }

    /// Optimal values computed by value iteration to precision `epsilon`.
    pub fn oracle(ssp: &ExplicitSsp, epsilon: f64) -> Result<Self, SolveError> {
        let r = vi_solve(ssp, epsilon, ViMode::Async)?;
        Ok(Heuristic { kind: HeuristicKind::Oracle, values: Some(r.value_function.as_slice().to_vec()), dead_ends: Vec::new() })
    }

    /// Builds a heuristic of the given kind for `ssp`.
    ///
    /// `Table` uses the problem's own table and fails without one.
    pub fn build(kind: HeuristicKind, ssp: &ExplicitSsp) -> Result<Self, SolveError> {
        match kind {
            HeuristicKind::Zero => Ok(Heuristic::zero()),
            HeuristicKind::DetAllOutcomes => Heuristic::det_ao(ssp),
            HeuristicKind::Oracle => Heuristic::oracle(ssp, ORACLE_EPSILON),
            HeuristicKind::Table => Heuristic::from_problem_table(ssp)
                .ok_or_else(|| SolveError::InvalidConfig("the problem has no heuristic table".to_string())),
        }
    }

    /// The heuristic's kind.
    pub fn kind(&self) -> HeuristicKind {
        self.kind
    }

    /// `h(s)`.
    pub fn value(&self, s: StateId) -> f64 {
        match &self.values {
            Some(v) => v.get(s).copied().unwrap_or(0.0),
            None => 0.0,
        }
    }

    /// States found to be dead ends while building the heuristic.
    pub fn dead_ends(&self) -> &[StateId] {
        &self.dead_ends
    }
}

/// `h(s) = 0` for every state.
pub fn h_zero(_s: StateId) -> f64 {
    0.0
}

/// The all-outcomes determinisation heuristic evaluated at one state.
pub fn h_det_ao(ssp: &ExplicitSsp, s: StateId) -> Result<f64, SolveError> {
    Ok(Heuristic::det_ao(ssp)?.value(s))
}

/// Perfect heuristic from value iteration.
pub fn h_oracle(ssp: &ExplicitSsp, epsilon: f64) -> Result<Heuristic, SolveError> {
    Heuristic::oracle(ssp, epsilon)
}

/// Explicit per-state values.
pub fn h_table(values: Vec<f64>) -> Heuristic {
    Heuristic::table(values)
}
