//! Small hand-built problems with known solutions.
//!
//! Each generator ships a heuristic table; goal states are listed last.

use crate::model::{ExplicitSsp, SspBuilder};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// A five-state problem with a cycle through the initial state.
///
/// States `s0..s3` are ids 0..3 and the goal `sg` is id 4. From `s0`, `a0`
/// (cost 1) reaches `s1` with probability 0.9 and `s2` otherwise, `a0'`
/// (cost 1) reaches `s2`, and `a0''` (cost 1) reaches `s3`. `a1` (cost 2)
/// and `a3` (cost 10) lead to the goal; `a2` (cost 1) reaches the goal or
/// returns to `s0` with equal probability. The heuristic is
/// `(2, 2, 1, 10, 0)`, and `V*(s0) = 2.9 / 0.95`.
pub fn fig7() -> ExplicitSsp {
    SspBuilder::new(5, 0)
        .goal(4)
        .action(0, "a0", 1.0, &[(1, 0.9), (2, 0.1)])
        .action(0, "a0'", 1.0, &[(2, 1.0)])
        .action(0, "a0''", 1.0, &[(3, 1.0)])
        .action(1, "a1", 2.0, &[(4, 1.0)])
        .action(2, "a2", 1.0, &[(4, 0.5), (0, 0.5)])
        .action(3, "a3", 10.0, &[(4, 1.0)])
        .labels(labels(&["s0", "s1", "s2", "s3", "sg"]))
        .heuristic_table(vec![2.0, 2.0, 1.0, 10.0, 0.0])
        .build()
        .expect("valid problem")
}

/// A deterministic problem whose heuristic makes the greedy route look
/// cheaper than it is, so values must later decrease.
///
/// `s0 -a0-> s1`, then `s1 -a1-> s2 -a2-> sg` (costs 1 and 3) or
/// `s1 -a1'-> s3 -a3-> sg` (costs 1 and 2). `a0` costs 1. The heuristic is
/// `(3, 2, 1, 2, 0)` and `V*(s0) = 4`.
pub fn fig9() -> ExplicitSsp {
    SspBuilder::new(5, 0)
        .goal(4)
        .action(0, "a0", 1.0, &[(1, 1.0)])
        .action(1, "a1", 1.0, &[(2, 1.0)])
        .action(1, "a1'", 1.0, &[(3, 1.0)])
        .action(2, "a2", 3.0, &[(4, 1.0)])
        .action(3, "a3", 2.0, &[(4, 1.0)])
        .labels(labels(&["s0", "s1", "s2", "s3", "sg"]))
        .heuristic_table(vec![3.0, 2.0, 1.0, 2.0, 0.0])
        .build()
        .expect("valid problem")
}

/// A problem with an inadmissible heuristic on which CG-iLAO* stops with
/// values that are consistent on the partial problem only.
///
/// `a0` (cost 1) reaches `s1` or `s3` with equal probability. From `s1`,
/// `a1` (cost 1) reaches `s2` and `a1'` (cost 4) reaches `s3`. `a2` (cost 9)
/// and `a3` (cost 6) lead to the goal. The heuristic is `(6, 10, 5, 0, 0)`.
pub fn fig10() -> ExplicitSsp {
    SspBuilder::new(5, 0)
        .goal(4)
        .action(0, "a0", 1.0, &[(1, 0.5), (3, 0.5)])
        .action(1, "a1", 1.0, &[(2, 1.0)])
        .action(1, "a1'", 4.0, &[(3, 1.0)])
        .action(2, "a2", 9.0, &[(4, 1.0)])
        .action(3, "a3", 6.0, &[(4, 1.0)])
        .labels(labels(&["s0", "s1", "s2", "s3", "sg"]))
        .heuristic_table(vec![6.0, 10.0, 5.0, 0.0, 0.0])
        .build()
        .expect("valid problem")
}

/// A chain on which small untracked value increases add up.
///
/// `s0 -a0-> s1 -> ... -> sn -> sg`, where `a0` costs 1 and every later
/// chain action costs `1 + 2 eps / 3`. A direct action `a0'` from `s0` to the
/// goal costs `n + 1 + eps`. The heuristic is `h(s0) = n + 1` and
/// `h(si) = n + 1 - i`. With `n = 3` the chain is worth `4 + 2 eps`.
pub fn fig11_chain(n: usize, eps: f64) -> ExplicitSsp {
    assert!(n >= 1, "the chain needs at least one link");
    let goal = n + 1;
    let step = 1.0 + 2.0 * eps / 3.0;
    let mut b = SspBuilder::new(n + 2, 0).goal(goal);
    b.push_action(0, "a0", 1.0, &[(1, 1.0)]);
    b.push_action(0, "a0'", n as f64 + 1.0 + eps, &[(goal, 1.0)]);
    for i in 1..=n {
        b.push_action(i, &format!("a{i}"), step, &[(i + 1, 1.0)]);
    }
    let mut names: Vec<String> = (0..=n).map(|i| format!("s{i}")).collect();
    names.push("sg".to_string());
    let mut h: Vec<f64> = (0..=n).map(|i| if i == 0 { n as f64 + 1.0 } else { (n + 1 - i) as f64 }).collect();
    h.push(0.0);
    b.labels(names).heuristic_table(h).build().expect("valid problem")
}

/// A deterministic problem whose LP with only some constraints has a
/// non-optimal solution.
///
/// `s0` reaches `s1` or `s2` at cost 2. `s1 -a1-> s3 -a3-> sg` costs 2 and 2,
/// `s2 -a2-> s4 -a4-> sg` costs 1 and 1.
pub fn fig4() -> ExplicitSsp {
    SspBuilder::new(6, 0)
        .goal(5)
        .action(0, "a0", 2.0, &[(1, 1.0)])
        .action(0, "a0'", 2.0, &[(2, 1.0)])
        .action(1, "a1", 2.0, &[(3, 1.0)])
        .action(2, "a2", 1.0, &[(4, 1.0)])
        .action(3, "a3", 2.0, &[(5, 1.0)])
        .action(4, "a4", 1.0, &[(5, 1.0)])
        .labels(labels(&["s0", "s1", "s2", "s3", "s4", "sg"]))
        .build()
        .expect("valid problem")
}
