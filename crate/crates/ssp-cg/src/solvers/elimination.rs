//! Action elimination from a lower and an upper bound.
//!
//! If `V_lb ≤ V* ≤ V_ub`, an action whose lower-bound Q-value exceeds the
//! smallest upper-bound Q-value of its state cannot be optimal there and can
//! be dropped for good.

use crate::error::SolveError;
use crate::model::{ActionId, ExplicitSsp, StateId};
use crate::partial::PartialSsp;
use crate::value::{q_raw, Counters, ValueFunction};

/// Actions whose lower-bound Q-value exceeds `best_ub`.
pub(crate) fn select_eliminated(lb_qs: &[(ActionId, f64)], best_ub: f64) -> Vec<ActionId> {
    lb_qs.iter().filter(|&&(_, q)| q > best_ub).map(|&(a, _)| a).collect()
}

/// Removes from `Â(s)` every action `a` with `Q_lb(s, a) > min_a' Q_ub(s, a')`.
///
/// The minimum ranges over `Â(s)`. Returns the removed actions. Fails without
/// touching the partial problem if every action would be removed.
///
/// ```
/// use ssp_cg::model::SspBuilder;
/// use ssp_cg::partial::PartialSsp;
/// use ssp_cg::solvers::eliminate_actions;
/// use ssp_cg::value::{Counters, ValueFunction};
///
/// let ssp = SspBuilder::new(2, 0)
///     .goal(1)
///     .action(0, "cheap", 1.0, &[(1, 1.0)])
///     .action(0, "dear", 3.0, &[(1, 1.0)])
///     .build()
///     .unwrap();
/// let mut p = PartialSsp::new(&ssp);
/// p.add_actions(&ssp, 0, &[0, 1]).unwrap();
/// let v = ValueFunction::from_vec(vec![1.0, 0.0]);
/// let gone = eliminate_actions(&ssp, &mut p, &v, &v, 0, &mut Counters::default()).unwrap();
/// assert_eq!(gone, vec![1]);
/// assert_eq!(p.actions(0), &[0]);
/// ```
pub fn eliminate_actions(
    ssp: &ExplicitSsp,
    partial: &mut PartialSsp,
    v_lb: &ValueFunction,
    v_ub: &ValueFunction,
    s: StateId,
    counters: &mut Counters,
) -> Result<Vec<ActionId>, SolveError> {
    let acts = partial.actions(s).to_vec();
    let lb_qs: Vec<(ActionId, f64)> = acts.iter().map(|&a| (a, q_raw(ssp, v_lb.as_slice(), a, counters))).collect();
    let best_ub = acts.iter().map(|&a| q_raw(ssp, v_ub.as_slice(), a, counters)).fold(f64::INFINITY, f64::min);
    let gone = select_eliminated(&lb_qs, best_ub);
    if !acts.is_empty() && gone.len() == acts.len() {
        return Err(SolveError::Internal(format!("elimination would remove every action at state {s}")));
    }
    for &a in &gone {
        partial.eliminate(s, a);
        counters.actions_eliminated += 1;
    }
    Ok(gone)
}
