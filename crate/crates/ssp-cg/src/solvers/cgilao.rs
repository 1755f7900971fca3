//! CG-iLAO*: iLAO* with partial expansions and constraint repair.

use crate::error::SolveError;
use crate::heuristics::Heuristic;
use crate::model::ExplicitSsp;
use crate::partial::ViolationSet;
use crate::value::dfs_from;

use super::search::{Change, Search};
use super::{NoObserver, SolveObserver, SolveResult, SolverConfig};

/// Solves `ssp` with CG-iLAO*.
///
/// Fringe states are expanded with `config.expansion`, and the search
/// follows the candidate policy from each expanded fringe into internal
/// states reached that way, expanding any fringe it meets. Backups only
/// consider the actions of the partial problem. A value increase larger than
/// `η` puts the state's missing actions into the violation set `Γ`; a
/// decrease larger than `η` puts every action of its internal predecessors
/// there. After the sweeps, each pair of `Γ` whose constraint is violated by
/// more than `ε` is repaired by adding the action and lowering the value.
/// The sweeps also hand over to that repair early, after the first, second,
/// fourth, eighth and later power-of-two sweep, when `Γ` holds a missing
/// action that is already better than its state's value by more than `ε`.
///
/// ```
/// use ssp_cg::domains::figures::fig9;
/// use ssp_cg::heuristics::Heuristic;
/// use ssp_cg::solvers::{cgilao_solve, Expansion, SolverConfig};
///
/// let ssp = fig9();
/// let h = Heuristic::from_problem_table(&ssp).unwrap();
/// let cfg = SolverConfig::with_epsilon(1e-4).expansion(Expansion::Tied);
/// let r = cgilao_solve(&ssp, &h, &cfg).unwrap();
/// assert!((r.value_at_initial - 4.0).abs() < 1e-9);
/// assert!(r.value_decrease_events >= 1);
/// ```
pub fn cgilao_solve(ssp: &ExplicitSsp, h: &Heuristic, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    cgilao_solve_observed(ssp, h, config, &mut NoObserver)
}

/// [`cgilao_solve`] with an observer.
pub fn cgilao_solve_observed(
    ssp: &ExplicitSsp,
    h: &Heuristic,
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<SolveResult, SolveError> {
    let mut st = Search::new(ssp, h, config, observer)?;
    loop {
        st.iterations += 1;
        partly_expand_fringes(&mut st)?;
        let envelope = st.envelope();
        let fringes = st.partial.fringe_states(&envelope);
        let internal: Vec<_> = envelope.iter().copied().filter(|&s| st.partial.is_internal(s)).collect();

        let old_policy = st.policy.clone();
        let mut pass = 0u64;
        let mut res = loop {
            pass += 1;
            st.begin_sweep()?;
            let mut res: f64 = 0.0;
            for &s in &internal {
                let (g, qs) = st.evaluate(s)?;
                let gate = st.gamma.is_empty();
                let g = st.bounds_step(s, g, &qs, gate)?;
                let old = st.v[s];
                match st.classify_change(old, g.value) {
                    Change::Increase => {
                        let ext = st.partial.ext_succs(ssp, s);
                        st.gamma.extend(ext);
                    }
                    Change::Decrease => {
                        let preds = st.partial.preds(ssp, s);
                        st.gamma.extend(preds);
                    }
                    Change::Small => {}
                }
                res = res.max((old - g.value).abs());
                st.v[s] = g.value;
                st.policy.set(s, g.action);
            }
            if !fringes.is_empty() || st.policy != old_policy || res <= config.epsilon {
                break res;
            }
            if pass.is_power_of_two() && has_violated_extension(&mut st) {
                break res;
            }
        };
        res = fix_constraints(&mut st, res)?;
        log::debug!(
            "cgilao iteration {}: |envelope| = {}, fringes = {}, |gamma| = {}, residual = {res:e}",
            st.iterations,
            envelope.len(),
            fringes.len(),
            st.gamma.len()
        );
        st.notify_iteration(res);
        if fringes.is_empty() && st.policy == old_policy && res <= config.epsilon {
            break;
        }
    }
    if !st.gamma.is_empty() {
        return Err(SolveError::Internal(format!("terminated with {} pending constraints", st.gamma.len())));
    }
    Ok(st.finish())
}

/// Expands the fringes of the candidate policy's envelope, following the
/// policy from each expanded state into the internal states it reaches.
fn partly_expand_fringes(st: &mut Search<'_>) -> Result<(), SolveError> {
    let n = st.ssp.num_states();
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    dfs_from(&st.partial.view(st.ssp), &st.policy, st.ssp.initial(), &mut seen, &mut order);
    let mut queue: std::collections::VecDeque<_> = st.partial.fringe_states(&order).into();
    while let Some(f) = queue.pop_front() {
        if !st.partial.is_artificial(f) {
            continue;
        }
        st.expand_fringe(f)?;
        let Some(a) = st.policy.get(f) else { continue };
        let children: Vec<_> = st.ssp.action(a).successors().collect();
        for c in children {
            if st.partial.is_internal(c) && !seen[c] {
                let mut reached = Vec::new();
                dfs_from(&st.partial.view(st.ssp), &st.policy, c, &mut seen, &mut reached);
                queue.extend(reached.into_iter().filter(|&x| st.partial.is_artificial(x)));
            }
        }
    }
    Ok(())
}

/// Whether `Γ` holds a missing action that beats the state's value by more
/// than `ε`.
fn has_violated_extension(st: &mut Search<'_>) -> bool {
    let pending: Vec<_> = st.gamma.iter().copied().collect();
    for (s, a) in pending {
        if st.partial.includes(a) || st.partial.is_eliminated(a) || !st.partial.is_internal(s) {
            continue;
        }
        if st.v[s] > st.q(a) + st.cfg.epsilon {
            return true;
        }
    }
    false
}

/// Repairs every violated constraint of `Γ` and replaces `Γ` with the
/// predecessors of the repaired states.
fn fix_constraints(st: &mut Search<'_>, mut res: f64) -> Result<f64, SolveError> {
    let ssp = st.ssp;
    let eps = st.cfg.epsilon;
    let pending = std::mem::take(&mut st.gamma);
    let mut next = ViolationSet::new();
    for (s, a) in pending {
        if st.partial.is_eliminated(a) || !st.partial.is_internal(s) {
            continue;
        }
        st.counters.constraints_checked += 1;
        let q = st.q(a);
        let vs = st.v[s];
        if vs > q + eps {
            if !st.partial.includes(a) {
                st.add(s, &[a])?;
                st.counters.constraints_added += 1;
            }
            res = res.max(vs - q);
            st.v[s] = q;
            st.decreases += 1;
            st.policy.set(s, a);
            next.extend(st.partial.preds(ssp, s));
        }
    }
    st.gamma = next;
    Ok(res)
}
