//! The JSON problem format.
//!
//! A problem file is one object:
//!
//! ```json
//! {
//!   "num_states": 3,
//!   "initial": 0,
//!   "goals": [2],
//!   "actions": [
//!     {"source": 0, "name": "go", "cost": 1.0,
//!      "outcomes": [{"target": 1, "prob": 0.5}, {"target": 2, "prob": 0.5}]},
//!     {"source": 1, "name": "go", "cost": 1.0, "outcomes": [{"target": 2, "prob": 1.0}]}
//!   ],
//!   "heuristic_table": [1.0, 1.0, 0.0],
//!   "state_labels": ["a", "b", "goal"]
//! }
//! ```
//!
//! `heuristic_table` and `state_labels` are optional, and an action may carry
//! `"give_up": true`. The canonical form written by [`save_json`] lists the
//! fields in the order above, actions in id order, and is pretty-printed
//! with two-space indentation and a trailing newline.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::model::{to_specs, ActionSpec, ExplicitSsp, SspBuilder, StateId};

/// The serialised shape of a problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Number of states.
    pub num_states: usize,
    /// Initial state.
    pub initial: StateId,
    /// Goal states.
    pub goals: Vec<StateId>,
    /// Actions in id order.
    pub actions: Vec<ActionSpec>,
    /// Optional per-state heuristic values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heuristic_table: Option<Vec<f64>>,
    /// Optional per-state names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_labels: Option<Vec<String>>,
}

impl ProblemFile {
    /// Captures a problem.
    pub fn from_ssp(ssp: &ExplicitSsp) -> Self {
        ProblemFile {
            num_states: ssp.num_states(),
            initial: ssp.initial(),
            goals: ssp.goals().to_vec(),
            actions: to_specs(ssp),
            heuristic_table: ssp.heuristic_table().map(<[f64]>::to_vec),
            state_labels: ssp.labels().map(<[String]>::to_vec),
        }
    }

    /// Validates and builds the problem.
    pub fn into_ssp(self) -> Result<ExplicitSsp, crate::error::ModelError> {
        let mut b = SspBuilder::new(self.num_states, self.initial);
        for g in self.goals {
            b = b.goal(g);
        }
        for spec in self.actions {
            b.push_spec(spec);
        }
        if let Some(l) = self.state_labels {
            b = b.labels(l);
        }
        if let Some(t) = self.heuristic_table {
            b = b.heuristic_table(t);
        }
        b.build()
    }
}

/// The canonical JSON text of a problem.
pub fn to_json_string(ssp: &ExplicitSsp) -> String {
    let mut text = serde_json::to_string_pretty(&ProblemFile::from_ssp(ssp)).expect("problems serialise");
    text.push('\n');
    text
}

/// Parses and validates problem JSON. `origin` names the source in errors.
///
/// ```
/// use ssp_cg::io::from_json_str;
///
/// let bad = r#"{"num_states": 2, "initial": 0, "goals": [1], "actions": [
///   {"source": 0, "name": "go", "cost": 1.0,
///    "outcomes": [{"target": 1, "prob": 0.5}, {"target": 0, "prob": 0.4}]}]}"#;
/// let err = from_json_str(bad, "inline").unwrap_err();
/// assert!(err.to_string().contains("sum"));
/// ```
pub fn from_json_str(text: &str, origin: &str) -> Result<ExplicitSsp, IoError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| IoError::Syntax {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_ssp().map_err(|source| IoError::Invalid { path: origin.to_string(), source })
}

/// Reads a problem file.
pub fn load_json(path: impl AsRef<Path>) -> Result<ExplicitSsp, IoError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File { path: name.clone(), source })?;
    from_json_str(&text, &name)
}

/// Writes a problem file in canonical form.
pub fn save_json(ssp: &ExplicitSsp, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, to_json_string(ssp))
        .map_err(|source| IoError::File { path: path.display().to_string(), source })
}
