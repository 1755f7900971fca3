//! iLAO*: heuristic search that expands every action of each fringe state.

use crate::error::SolveError;
use crate::heuristics::Heuristic;
use crate::model::ExplicitSsp;

use super::search::Search;
use super::{NoObserver, SolveObserver, SolveResult, SolverConfig};

/// Solves `ssp` with iLAO*.
///
/// Each iteration expands every fringe state on the candidate policy's
/// envelope with all of its actions, then repeats Gauss-Seidel sweeps of
/// Bellman backups over the envelope in post-order, recomputing the greedy
/// policy after each sweep. A sweep loop stops when fringes remain, the
/// policy changed, or the residual is at most `ε`; the solver stops when an
/// iteration ends with none of the first two and a residual at most `ε`.
/// `config.expansion` is ignored.
///
/// ```
/// use ssp_cg::domains::figures::fig7;
/// use ssp_cg::heuristics::Heuristic;
/// use ssp_cg::solvers::{ilao_solve, SolverConfig};
///
/// let ssp = fig7();
/// let h = Heuristic::from_problem_table(&ssp).unwrap();
/// let r = ilao_solve(&ssp, &h, &SolverConfig::with_epsilon(1e-9)).unwrap();
/// assert!((r.value_at_initial - 3.0526).abs() < 1e-3);
/// ```
pub fn ilao_solve(ssp: &ExplicitSsp, h: &Heuristic, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    ilao_solve_observed(ssp, h, config, &mut NoObserver)
}

/// [`ilao_solve`] with an observer.
pub fn ilao_solve_observed(
    ssp: &ExplicitSsp,
    h: &Heuristic,
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<SolveResult, SolveError> {
    let mut st = Search::new(ssp, h, config, observer)?;
    loop {
        st.iterations += 1;
        let envelope = st.envelope();
        for &s in &envelope {
            if st.partial.is_artificial(s) {
                st.expand_all(s)?;
            }
        }
        let fringes = st.partial.fringe_states(&st.envelope());
        let internal: Vec<_> = envelope.iter().copied().filter(|&s| st.partial.is_internal(s)).collect();

        let old_policy = st.policy.clone();
        let res = loop {
            st.begin_sweep()?;
            let mut res: f64 = 0.0;
            for &s in &internal {
                let (g, qs) = st.evaluate(s)?;
                let g = st.bounds_step(s, g, &qs, true)?;
                let old = st.v[s];
                st.classify_change(old, g.value);
                res = res.max((old - g.value).abs());
                st.v[s] = g.value;
            }
            for &s in &internal {
                let g = st.greedy_internal(s)?;
                st.policy.set(s, g.action);
            }
            if !fringes.is_empty() || st.policy != old_policy || res <= config.epsilon {
                break res;
            }
        };
        log::debug!(
            "ilao iteration {}: |envelope| = {}, fringes = {}, residual = {res:e}",
            st.iterations,
            envelope.len(),
            fringes.len()
        );
        st.notify_iteration(res);
        if fringes.is_empty() && st.policy == old_policy && res <= config.epsilon {
            break;
        }
    }
    Ok(st.finish())
}
