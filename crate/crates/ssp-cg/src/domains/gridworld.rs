//! The eight-cell navigation grid around a blocked centre.
//!
//! Cells are numbered clockwise from the start:
//!
//! ```text
//! 2 3 4
//! 1 # 5
//! 8 7 6
//! ```
//!
//! Cell `k` is state `k - 1`; cell 1 is the start and cell 4 the goal.
//! The actions `N`, `E` and `S` cost 1 and reach the neighbouring cell with
//! probability 0.5, staying put otherwise. A move off the grid leaves the
//! agent where it is, and moves into the centre are not available.

use crate::model::{ExplicitSsp, SspBuilder};

const CELLS: [(i32, i32); 8] = [(0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0), (0, 0)];
const GOAL_CELL: usize = 4;
const TABLE: [f64; 8] = [5.0, 3.0, 2.0, 0.0, 0.0, 0.0, 0.0, 4.0];

fn cell_at(x: i32, y: i32) -> Option<usize> {
    CELLS.iter().position(|&c| c == (x, y))
}

/// Builds the grid with its heuristic table.
///
/// The table gives cells 1, 2, 3 and 8 the values 5, 3, 2 and 4 and every
/// other cell 0.
///
/// ```
/// use ssp_cg::domains::gridworld::gen_gridworld;
///
/// let ssp = gen_gridworld();
/// assert_eq!(ssp.num_states(), 8);
/// assert_eq!(ssp.goals(), &[3]);
/// assert_eq!(ssp.heuristic_table().unwrap()[7], 4.0);
/// ```
pub fn gen_gridworld() -> ExplicitSsp {
    let goal = GOAL_CELL - 1;
    let mut b = SspBuilder::new(CELLS.len(), 0).goal(goal);
    for (s, &(x, y)) in CELLS.iter().enumerate() {
        if s == goal {
            continue;
        }
        for (name, dx, dy) in [("N", 0, 1), ("E", 1, 0), ("S", 0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            let on_grid = (0..3).contains(&nx) && (0..3).contains(&ny);
            if !on_grid {
                b.push_action(s, name, 1.0, &[(s, 1.0)]);
            } else if let Some(t) = cell_at(nx, ny) {
                b.push_action(s, name, 1.0, &[(t, 0.5), (s, 0.5)]);
            }
        }
    }
    let labels = (1..=CELLS.len()).map(|k| k.to_string()).collect();
    b.labels(labels).heuristic_table(TABLE.to_vec()).build().expect("valid problem")
}
