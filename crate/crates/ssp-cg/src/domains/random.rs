//! Seeded random problems for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{ExplicitSsp, SspBuilder, StateId};

/// Parameters of [`gen_random`].
///
/// Ranges are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSspParams {
    /// Total number of states, goals included.
    pub num_states: usize,
    /// Smallest number of actions per non-goal state.
    pub actions_min: usize,
    /// Largest number of actions per non-goal state.
    pub actions_max: usize,
    /// Smallest number of outcomes per action.
    pub outcomes_min: usize,
    /// Largest number of outcomes per action.
    pub outcomes_max: usize,
    /// Smallest action cost.
    pub cost_min: f64,
    /// Largest action cost.
    pub cost_max: f64,
    /// Number of goal states.
    pub num_goals: usize,
    /// Generator seed.
    pub seed: u64,
}

impl Default for RandomSspParams {
    fn default() -> Self {
        RandomSspParams {
            num_states: 50,
            actions_min: 1,
            actions_max: 5,
            outcomes_min: 1,
            outcomes_max: 3,
            cost_min: 1.0,
            cost_max: 10.0,
            num_goals: 1,
            seed: 0,
        }
    }
}

impl RandomSspParams {
    /// Default parameters with `num_states` states and the given seed.
    pub fn new(num_states: usize, seed: u64) -> Self {
        RandomSspParams { num_states, seed, ..Self::default() }
    }
}

/// Generates a random problem.
///
/// The last `num_goals` states are goals and state 0 is the initial state.
/// The first action of every non-goal state `s` has an outcome at a state of
/// higher index, so every state can reach a goal. Outcome probabilities are
/// normalised random weights and costs are uniform in the cost range. The
/// generator is a ChaCha8 stream seeded with `seed`.
///
/// ```
/// use ssp_cg::domains::random::{gen_random, RandomSspParams};
///
/// let p = RandomSspParams::new(20, 7);
/// let a = gen_random(&p);
/// let b = gen_random(&p);
/// assert_eq!(ssp_cg::io::to_json_string(&a), ssp_cg::io::to_json_string(&b));
/// ```
///
/// # Panics
///
/// Panics if the parameters are inconsistent: fewer than one goal, no
/// non-goal state, an empty range, or a cost range that is not positive.
pub fn gen_random(params: &RandomSspParams) -> ExplicitSsp {
    let p = params;
    assert!(p.num_goals >= 1 && p.num_goals < p.num_states, "need at least one goal and one other state");
    assert!(1 <= p.actions_min && p.actions_min <= p.actions_max, "invalid action range");
    assert!(1 <= p.outcomes_min && p.outcomes_min <= p.outcomes_max, "invalid outcome range");
    assert!(0.0 < p.cost_min && p.cost_min <= p.cost_max, "invalid cost range");
    let n = p.num_states;
    let first_goal = n - p.num_goals;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut b = SspBuilder::new(n, 0);
    for g in first_goal..n {
        b = b.goal(g);
    }
    let all: Vec<StateId> = (0..n).collect();
    for s in 0..first_goal {
        let k = rng.gen_range(p.actions_min..=p.actions_max);
        for i in 0..k {
            let m = rng.gen_range(p.outcomes_min..=p.outcomes_max).min(n);
            let mut targets: Vec<StateId> = Vec::with_capacity(m);
            if i == 0 {
                targets.push(rng.gen_range(s + 1..n));
            }
            while targets.len() < m {
                let t = *all.choose(&mut rng).expect("non-empty");
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
            let weights: Vec<f64> = targets.iter().map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut outcomes: Vec<(StateId, f64)> = targets.iter().zip(&weights).map(|(&t, &w)| (t, w / total)).collect();
            let head: f64 = outcomes[..m - 1].iter().map(|o| o.1).sum();
            outcomes[m - 1].1 = 1.0 - head;
            let cost = if p.cost_min == p.cost_max { p.cost_min } else { rng.gen_range(p.cost_min..=p.cost_max) };
            b.push_action(s, &format!("a{s}_{i}"), cost, &outcomes);
        }
    }
    b.build().expect("generated problems are valid")
}
