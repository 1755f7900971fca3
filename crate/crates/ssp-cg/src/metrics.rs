//! How much of the action space a solver touched.

use crate::model::ExplicitSsp;
use crate::partial::PartialSsp;

/// Per-state action densities of a partial problem, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    /// `|Â(s)| / |A(s)|` for each internal state, give-up actions excluded.
    pub densities: Vec<f64>,
    /// Area under the step curve of the sorted densities over the unit
    /// interval of states.
    pub auc: f64,
}

/// Computes the density curve and its area.
///
/// Internal states without regular actions are skipped. With no state left
/// the area is 1.
///
/// ```
/// use ssp_cg::metrics::density_auc;
/// use ssp_cg::model::SspBuilder;
/// use ssp_cg::partial::PartialSsp;
///
/// let ssp = SspBuilder::new(2, 0)
///     .goal(1)
///     .action(0, "a", 1.0, &[(1, 1.0)])
///     .action(0, "b", 2.0, &[(1, 1.0)])
///     .action(0, "c", 3.0, &[(1, 1.0)])
///     .action(0, "d", 4.0, &[(1, 1.0)])
///     .build()
///     .unwrap();
/// let mut p = PartialSsp::new(&ssp);
/// p.add_actions(&ssp, 0, &[0, 1]).unwrap();
/// let curve = density_auc(&ssp, &p);
/// assert_eq!(curve.densities, vec![0.5]);
/// assert_eq!(curve.auc, 0.5);
/// ```
pub fn density_auc(ssp: &ExplicitSsp, partial: &PartialSsp) -> DensityCurve {
    let mut densities: Vec<f64> = partial
        .internal_states()
        .filter_map(|s| {
            let total = ssp.num_regular_actions(s);
            if total == 0 {
                return None;
            }
            let used = partial.actions(s).iter().filter(|&&a| !ssp.action(a).give_up).count();
            Some(used as f64 / total as f64)
        })
        .collect();
    densities.sort_by(f64::total_cmp);
    let auc = if densities.is_empty() { 1.0 } else { densities.iter().sum::<f64>() / densities.len() as f64 };
    DensityCurve { densities, auc }
}
