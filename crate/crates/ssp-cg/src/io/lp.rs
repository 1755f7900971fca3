//! Linear programs whose constraints are the Bellman inequalities.
//!
//! For a set of internal states and actions the program is
//!
//! ```text
//! maximise   V_{s0}
//! subject to V_s - sum_{s'} P(s'|s,a) V_{s'} <= C(s,a)   for each (s, a)
//!            V_g = c_g                                   for each terminal g
//! ```
//!
//! where `c_g` is 0 at a true goal and the heuristic value at an artificial
//! goal. The text form uses the CPLEX LP layout with variables `V_<state>`,
//! inequality rows `c_<state>_<action>` and equality rows `e_<state>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::IoError;
use crate::heuristics::Heuristic;
use crate::model::{ActionId, ExplicitSsp, StateId};
use crate::partial::PartialSsp;
use crate::value::ValueFunction;

/// One inequality `sum coef * V <= rhs` of the program.
#[derive(Debug, Clone, PartialEq)]
pub struct LpConstraint {
    /// State whose value is bounded.
    pub state: StateId,
    /// Action the bound comes from.
    pub action: ActionId,
    /// Coefficients by variable, in ascending state order.
    pub terms: Vec<(StateId, f64)>,
    /// Right-hand side, the action cost.
    pub rhs: f64,
}

impl LpConstraint {
    /// The row name `c_<state>_<action>`.
    pub fn name(&self) -> String {
        format!("c_{}_{}", self.state, self.action)
    }

    /// `rhs - lhs(V)`; negative when the constraint is violated.
    pub fn slack(&self, v: &ValueFunction) -> f64 {
        self.rhs - self.terms.iter().map(|&(s, c)| c * v.get(s)).sum::<f64>()
    }
}

/// A Bellman linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    /// The state whose value is maximised.
    pub objective: StateId,
    /// Inequality rows.
    pub constraints: Vec<LpConstraint>,
    /// Equality rows `V_state = value`.
    pub equalities: Vec<(StateId, f64)>,
}

fn constraint(ssp: &ExplicitSsp, s: StateId, a: ActionId) -> LpConstraint {
    let act = ssp.action(a);
    let mut terms: BTreeMap<StateId, f64> = BTreeMap::new();
    *terms.entry(s).or_default() += 1.0;
    for o in &act.outcomes {
        *terms.entry(o.target).or_default() -= o.prob;
    }
    LpConstraint { state: s, action: a, terms: terms.into_iter().collect(), rhs: act.cost }
}

impl LinearProgram {
    /// The program over every state and action of `ssp`.
    pub fn for_ssp(ssp: &ExplicitSsp) -> Self {
        let mut constraints = Vec::new();
        for s in 0..ssp.num_states() {
            for &a in ssp.actions_of(s) {
                constraints.push(constraint(ssp, s, a));
            }
        }
        let equalities = ssp.goals().iter().map(|&g| (g, 0.0)).collect();
        LinearProgram { objective: ssp.initial(), constraints, equalities }
    }

    /// The restricted program of a partial problem, with artificial goals
    /// fixed to their heuristic values.
    ///
    /// ```
    /// use ssp_cg::domains::figures::fig7;
    /// use ssp_cg::heuristics::Heuristic;
    /// use ssp_cg::io::LinearProgram;
    /// use ssp_cg::partial::PartialSsp;
    ///
    /// let ssp = fig7();
    /// let h = Heuristic::from_problem_table(&ssp).unwrap();
    /// let mut p = PartialSsp::new(&ssp);
    /// p.add_actions(&ssp, 0, ssp.actions_of(0)).unwrap();
    /// let lp = LinearProgram::for_partial(&ssp, &p, &h);
    /// assert_eq!(lp.constraints.len(), 3);
    /// assert_eq!(lp.equalities.len(), 3);
    /// ```
    pub fn for_partial(ssp: &ExplicitSsp, partial: &PartialSsp, h: &Heuristic) -> Self {
        let mut constraints = Vec::new();
        let mut equalities = Vec::new();
        for s in 0..ssp.num_states() {
            if partial.is_internal(s) {
                for &a in partial.actions(s) {
                    constraints.push(constraint(ssp, s, a));
                }
            } else if partial.is_artificial(s) {
                equalities.push((s, h.value(s)));
            } else if partial.contains(s) {
                equalities.push((s, 0.0));
            }
        }
        LinearProgram { objective: partial.initial(), constraints, equalities }
    }

    /// The CPLEX LP text of the program.
    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        out.push_str("\\ Bellman inequalities\nMaximize\n");
        let _ = writeln!(out, " obj: V_{}", self.objective);
        out.push_str("Subject To\n");
        for c in &self.constraints {
            let _ = write!(out, " {}:", c.name());
            for (i, &(s, coef)) in c.terms.iter().enumerate() {
                let sign = if coef < 0.0 { "-" } else if i == 0 { "" } else { "+" };
                let mag = coef.abs();
                if !sign.is_empty() {
                    let _ = write!(out, " {sign}");
                }
                if mag == 1.0 {
                    let _ = write!(out, " V_{s}");
                } else {
                    let _ = write!(out, " {mag} V_{s}");
                }
            }
            let _ = writeln!(out, " <= {}", c.rhs);
        }
        for &(s, value) in &self.equalities {
            let _ = writeln!(out, " e_{s}: V_{s} = {value}");
        }
        out.push_str("End\n");
        out
    }

    /// Parses text written by [`to_lp_string`](Self::to_lp_string).
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut objective = None;
        let mut constraints = Vec::new();
        let mut equalities = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: &str| IoError::Lp { line: line_no, message: message.to_string() };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('\\') {
                continue;
            }
            if matches!(line, "Maximize" | "Subject To" | "End") {
                continue;
            }
            let (name, body) = line.split_once(':').ok_or_else(|| err("expected `name: expression`"))?;
            let name = name.trim();
            if name == "obj" {
                objective = Some(parse_var(body.trim()).ok_or_else(|| err("bad objective"))?);
            } else if let Some(rest) = name.strip_prefix("c_") {
                let (s, a) = rest.split_once('_').ok_or_else(|| err("bad constraint name"))?;
                let state: StateId = s.parse().map_err(|_| err("bad state in constraint name"))?;
                let action: ActionId = a.parse().map_err(|_| err("bad action in constraint name"))?;
                let (lhs, rhs) = body.split_once("<=").ok_or_else(|| err("expected `<=`"))?;
                let rhs: f64 = rhs.trim().parse().map_err(|_| err("bad right-hand side"))?;
                let terms = parse_terms(lhs).ok_or_else(|| err("bad linear expression"))?;
                constraints.push(LpConstraint { state, action, terms, rhs });
            } else if name.starts_with("e_") {
                let (lhs, rhs) = body.split_once('=').ok_or_else(|| err("expected `=`"))?;
                let s = parse_var(lhs.trim()).ok_or_else(|| err("bad variable"))?;
                let value: f64 = rhs.trim().parse().map_err(|_| err("bad constant"))?;
                equalities.push((s, value));
            } else {
                return Err(err("unknown row name"));
            }
        }
        let objective = objective.ok_or(IoError::Lp { line: 0, message: "missing objective".to_string() })?;
        Ok(LinearProgram { objective, constraints, equalities })
    }
}

fn parse_var(tok: &str) -> Option<StateId> {
    tok.strip_prefix("V_")?.parse().ok()
}

fn parse_terms(expr: &str) -> Option<Vec<(StateId, f64)>> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef = None;
    for tok in expr.split_whitespace() {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Some(s) = parse_var(tok) {
                    terms.push((s, sign * coef.take().unwrap_or(1.0)));
                    sign = 1.0;
                } else {
                    coef = Some(tok.parse::<f64>().ok()?);
                }
            }
        }
    }
    if coef.is_some() {
        return None;
    }
    Some(terms)
}

/// Writes the program to `path`.
pub fn export_lp(lp: &LinearProgram, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, lp.to_lp_string()).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

/// Which rows a value function satisfies, and how tightly.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    /// Names of violated rows, inequalities first.
    pub violated: Vec<String>,
    /// Inequalities satisfied with slack at most the tolerance.
    pub tight: Vec<(StateId, ActionId)>,
    /// Inequalities satisfied with a larger slack.
    pub slack: Vec<(StateId, ActionId)>,
    /// Largest violation over all rows.
    pub max_violation: f64,
}

impl FeasibilityReport {
    /// Whether every row holds within the tolerance.
    pub fn feasible(&self) -> bool {
        self.violated.is_empty()
    }

    /// Whether the constraint of `(s, a)` is tight.
    pub fn is_tight(&self, s: StateId, a: ActionId) -> bool {
        self.tight.contains(&(s, a))
    }
}

/// Checks `v` against every row of `lp` with absolute tolerance `epsilon`.
///
/// ```
/// use ssp_cg::domains::figures::fig7;
/// use ssp_cg::io::{check_lp_feasibility, LinearProgram};
/// use ssp_cg::solvers::{vi_solve, ViMode};
///
/// let ssp = fig7();
/// let r = vi_solve(&ssp, 1e-12, ViMode::Async).unwrap();
/// let report = check_lp_feasibility(&LinearProgram::for_ssp(&ssp), &r.value_function, 1e-6);
/// assert!(report.feasible());
/// for (s, a) in r.policy.iter() {
///     assert!(report.is_tight(s, a));
/// }
/// ```
pub fn check_lp_feasibility(lp: &LinearProgram, v: &ValueFunction, epsilon: f64) -> FeasibilityReport {
    let mut report = FeasibilityReport::default();
    for c in &lp.constraints {
        let slack = c.slack(v);
        if slack < -epsilon {
            report.violated.push(c.name());
            report.max_violation = report.max_violation.max(-slack);
        } else if slack <= epsilon {
            report.tight.push((c.state, c.action));
        } else {
            report.slack.push((c.state, c.action));
        }
    }
    for &(s, value) in &lp.equalities {
        let gap = (v.get(s) - value).abs();
        if gap > epsilon {
            report.violated.push(format!("e_{s}"));
            report.max_violation = report.max_violation.max(gap);
        }
    }
    report
}
