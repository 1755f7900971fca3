//! Problem files and linear-program export.

pub mod json;
pub mod lp;

pub use json::{from_json_str, load_json, save_json, to_json_string, ProblemFile};
pub use lp::{check_lp_feasibility, export_lp, FeasibilityReport, LinearProgram, LpConstraint};
