//! Triangle Tireworld with an optional head start.
//!
//! Locations `r-c` form a triangle with `r + c <= 2n + 2`: corner `A` is
//! `1-1`, corner `B` is `(2n+1)-1` and the goal corner `C` is `1-(2n+1)`.
//! Roads are one-way. Every move costs 1 and gives a flat tyre with
//! probability 0.5. A flat tyre is replaced with a carried spare, and a spare
//! can be loaded at any location of an even row or at either end of an odd
//! row other than the first. Without a spare a flat tyre is a dead end.
//!
//! The state id of `(location, spare, flat)` is `(location * 2 + spare) * 2 +
//! flat`, where locations are numbered row by row from `1-1`.

use crate::model::{ExplicitSsp, SspBuilder, StateId};

/// Row and column of a location.
pub type Location = (usize, usize);

/// The location grid of a triangle of size `n`.
#[derive(Debug, Clone)]
pub struct Layout {
    n: usize,
    locations: Vec<Location>,
}

impl Layout {
    /// The layout of size `n`; `n` must be at least 1.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a triangle needs size at least 1");
        let side = 2 * n + 1;
        let locations = (1..=side).flat_map(|r| (1..=side + 1 - r).map(move |c| (r, c))).collect();
        Layout { n, locations }
    }

    /// All locations, row by row.
    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    /// Index of a location, if it exists.
    pub fn index(&self, (r, c): Location) -> Option<usize> {
        self.locations.iter().position(|&l| l == (r, c))
    }

    fn exists(&self, (r, c): Location) -> bool {
        r >= 1 && c >= 1 && r + c <= 2 * self.n + 2
    }

    /// Locations directly reachable by road from `(r, c)`.
    pub fn roads(&self, (r, c): Location) -> Vec<Location> {
        let mut out = Vec::new();
        let odd_row = r % 2 == 1;
        if odd_row {
            out.push((r, c + 1));
        }
        if odd_row || c % 2 == 1 {
            out.push((r + 1, c));
        }
        if r >= 2 && (!odd_row || c % 2 == 1) {
            out.push((r - 1, c + 1));
        }
        out.retain(|&l| self.exists(l));
        out
    }

    /// Whether a spare tyre can be loaded at `(r, c)`.
    pub fn has_spare(&self, (r, c): Location) -> bool {
        if r == 1 {
            false
        } else if r % 2 == 0 {
            true
        } else {
            c == 1 || r + c == 2 * self.n + 2
        }
    }

    /// The goal corner.
    pub fn goal(&self) -> Location {
        (1, 2 * self.n + 1)
    }
}

fn state_id(loc: usize, spare: bool, flat: bool) -> StateId {
    (loc * 2 + spare as usize) * 2 + flat as usize
}

/// Builds Triangle Tireworld of size `n` starting at `(d+1)-1`.
///
/// `d = 0` starts at `A` and `d = 2n` at `B`. The car starts without a spare
/// and without a flat tyre. Every state at `C` is a goal.
///
/// ```
/// use ssp_cg::domains::tireworld::gen_triangle_tireworld;
///
/// let ssp = gen_triangle_tireworld(1, 0);
/// assert_eq!(ssp.num_states(), 6 * 4);
/// assert_eq!(ssp.goals().len(), 4);
/// ```
pub fn gen_triangle_tireworld(n: usize, d: usize) -> ExplicitSsp {
    assert!(d <= 2 * n, "the head start must be at most 2n");
    let layout = Layout::new(n);
    let locs = layout.locations();
    let goal = layout.index(layout.goal()).expect("goal corner exists");
    let start = layout.index((d + 1, 1)).expect("start exists");
    let mut b = SspBuilder::new(locs.len() * 4, state_id(start, false, false));
    for spare in [false, true] {
        for flat in [false, true] {
            b = b.goal(state_id(goal, spare, flat));
        }
    }
    let mut labels = Vec::with_capacity(locs.len() * 4);
    for (li, &(r, c)) in locs.iter().enumerate() {
        for spare in [false, true] {
            for flat in [false, true] {
                labels.push(format!("{r}-{c}{}{}", if spare { "+spare" } else { "" }, if flat { "+flat" } else { "" }));
                if li == goal {
                    continue;
                }
                let s = state_id(li, spare, flat);
                if !flat {
                    for (tr, tc) in layout.roads((r, c)) {
                        let t = layout.index((tr, tc)).expect("road target exists");
                        b.push_action(
                            s,
                            &format!("move-{r}-{c}-{tr}-{tc}"),
                            1.0,
                            &[(state_id(t, spare, false), 0.5), (state_id(t, spare, true), 0.5)],
                        );
                    }
                }
                if flat && spare {
                    b.push_action(s, "change-tire", 1.0, &[(state_id(li, false, false), 1.0)]);
                }
                if !spare && layout.has_spare((r, c)) {
                    b.push_action(s, "load-tire", 1.0, &[(state_id(li, true, flat), 1.0)]);
                }
            }
        }
    }
    b.labels(labels).build().expect("valid problem")
}
