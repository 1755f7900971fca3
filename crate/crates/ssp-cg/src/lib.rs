//! Optimal solvers for explicit-state stochastic shortest path problems.
//!
//! A problem ([`model::ExplicitSsp`]) is a finite set of states with
//! grounded probabilistic actions of positive cost. It has an initial state
//! and a set of goals. Besides value iteration and iLAO*, the crate provides
//! CG-iLAO*. That variant of iLAO* adds an action to its partial problem
//! only when a constraint check shows the action may matter.
//!
//! ```
//! use ssp_cg::domains::figures::fig7;
//! use ssp_cg::heuristics::Heuristic;
//! use ssp_cg::solvers::{cgilao_solve, vi_solve, Expansion, SolverConfig, ViMode};
//!
//! let ssp = fig7();
//! let h = Heuristic::det_ao(&ssp).unwrap();
//! let cfg = SolverConfig::with_epsilon(1e-6).expansion(Expansion::Single);
//! let cg = cgilao_solve(&ssp, &h, &cfg).unwrap();
//! let vi = vi_solve(&ssp, 1e-9, ViMode::Async).unwrap();
//! assert!((cg.value_at_initial - vi.value_at_initial).abs() < 1e-4);
//! ```
//!
//! Modules:
//!
//! * [`model`]: problems, validation and the fixed-penalty transform.
//! * [`value`]: Q-values, Bellman backups, greedy policies and consistency
//!   checks.
//! * [`partial`]: the partial problem grown by the search solvers.
//! * [`heuristics`]: admissible heuristics.
//! * [`solvers`]: value iteration, iLAO*, CG-iLAO* and action elimination.
//! * [`domains`]: figure problems, gridworld, Triangle Tireworld and random
//!   problems.
//! * [`io`]: the JSON problem format and LP export.
//! * [`metrics`] and [`bench`]: density curves and run statistics.

pub mod bench;
pub mod determinize;
pub mod domains;
pub mod error;
pub mod heuristics;
pub mod io;
pub mod metrics;
pub mod model;
pub mod partial;
pub mod solvers;
pub mod value;

pub use error::{IoError, ModelError, PartialError, SolveError};
pub use heuristics::{Heuristic, HeuristicKind};
pub use model::{ActionId, ExplicitSsp, SspBuilder, StateId};
pub use partial::PartialSsp;
pub use solvers::{SolveResult, SolverConfig, SolverKind};
pub use value::{Counters, PolicyMap, ValueFunction};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/problems.md")]
    struct Problems;
    #[doc = include_str!("../../../book/src/values.md")]
    struct Values;
    #[doc = include_str!("../../../book/src/partial.md")]
    struct Partial;
    #[doc = include_str!("../../../book/src/solvers.md")]
    struct Solvers;
    #[doc = include_str!("../../../book/src/expansion.md")]
    struct Expansion;
    #[doc = include_str!("../../../book/src/elimination.md")]
    struct Elimination;
    #[doc = include_str!("../../../book/src/formats.md")]
    struct Formats;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
