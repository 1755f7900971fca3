//! Value iteration over the whole state space.

use std::time::Instant;

use crate::error::SolveError;
use crate::model::ExplicitSsp;
use crate::partial::PartialSizes;
use crate::value::{check_global_econsistency, greedy_raw, Counters, PolicyMap, ValueFunction};

use super::{SolveResult, SolverConfig};

/// Order in which a sweep updates the states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViMode {
    /// Jacobi sweeps: every backup reads the previous sweep's values.
    Sync,
    /// Gauss-Seidel sweeps in ascending state order, updating in place.
    Async,
}

/// Value iteration from `V = 0` until every residual is at most `epsilon`.
///
/// ```
/// use ssp_cg::domains::figures::fig7;
/// use ssp_cg::solvers::{vi_solve, ViMode};
///
/// let r = vi_solve(&fig7(), 1e-9, ViMode::Async).unwrap();
/// assert!((r.value_at_initial - 2.9 / 0.95).abs() < 1e-6);
/// ```
pub fn vi_solve(ssp: &ExplicitSsp, epsilon: f64, mode: ViMode) -> Result<SolveResult, SolveError> {
    vi_solve_with(ssp, &SolverConfig::with_epsilon(epsilon), mode)
}

/// Value iteration using the tolerance and guards of `config`.
pub fn vi_solve_with(ssp: &ExplicitSsp, config: &SolverConfig, mode: ViMode) -> Result<SolveResult, SolveError> {
    config.validate()?;
    let n = ssp.num_states();
    let mut v = vec![0.0; n];
    let mut next = v.clone();
    let mut counters = Counters::default();
    let mut sweeps = 0u64;
    loop {
        if sweeps >= config.max_iterations {
            return Err(SolveError::NonConvergence(sweeps));
        }
        if config.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SolveError::Timeout(sweeps));
        }
        sweeps += 1;
        let mut res: f64 = 0.0;
        for s in 0..n {
            if ssp.is_goal(s) {
                continue;
            }
            let src = if mode == ViMode::Sync { &v } else { &next };
            let g = greedy_raw(ssp, src, ssp.actions_of(s), &mut counters)
                .ok_or(crate::error::ModelError::ImproperState(s))?;
            counters.backups += 1;
            res = res.max((g.value - v[s]).abs());
            next[s] = g.value;
            if mode == ViMode::Async {
                v[s] = g.value;
            }
        }
        if mode == ViMode::Sync {
            v.copy_from_slice(&next);
        }
        log::trace!("vi sweep {sweeps}: residual {res:e}");
        if res <= config.epsilon {
            break;
        }
    }
    let vf = ValueFunction::from_vec(v);
    let mut pi = PolicyMap::empty(n);
    let mut scratch = Counters::default();
    let mut stack = vec![ssp.initial()];
    let mut seen = vec![false; n];
    seen[ssp.initial()] = true;
    while let Some(s) = stack.pop() {
        if ssp.is_goal(s) {
            continue;
        }
        let g = greedy_raw(ssp, vf.as_slice(), ssp.actions_of(s), &mut scratch).expect("checked during sweeps");
        pi.set(s, g.action);
        for t in ssp.action(g.action).successors() {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    let regular: usize = (0..n).filter(|&s| !ssp.is_goal(s)).map(|s| ssp.num_regular_actions(s)).sum();
    Ok(SolveResult {
        value_at_initial: vf.get(ssp.initial()),
        terminated_econsistent_on_partial: check_global_econsistency(ssp, &vf, config.epsilon),
        value_function: vf,
        policy: pi,
        counters,
        partial_sizes: PartialSizes { states: n, actions: regular, actions_max: regular },
        iterations: sweeps,
        sweeps,
        value_decrease_events: 0,
        value_increase_events: 0,
        partial: None,
        eliminated: Vec::new(),
    })
}
