//! Problem generators and the textual problem specifications the CLI accepts.

pub mod figures;
pub mod gridworld;
pub mod random;
pub mod tireworld;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::error::IoError;
use crate::model::ExplicitSsp;

pub use gridworld::gen_gridworld;
pub use random::{gen_random, RandomSspParams};
pub use tireworld::gen_triangle_tireworld;

/// A problem source: a file or a generator with parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// A JSON problem file.
    File(PathBuf),
    /// The eight-cell grid.
    Gridworld,
    /// See [`figures::fig4`].
    Fig4,
    /// See [`figures::fig7`].
    Fig7,
    /// See [`figures::fig9`].
    Fig9,
    /// See [`figures::fig10`].
    Fig10,
    /// See [`figures::fig11_chain`].
    Fig11Chain { n: usize, eps: f64 },
    /// See [`gen_triangle_tireworld`].
    TriangleTireworld { n: usize, d: usize },
    /// See [`gen_random`].
    Random(RandomSspParams),
}

/// A generator specification that could not be parsed.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid problem specification `{spec}`: {message}")]
pub struct SpecError {
    /// The offending text.
    pub spec: String,
    /// What is wrong with it.
    pub message: String,
}

impl ProblemSpec {
    /// Builds or loads the problem.
    pub fn build(&self) -> Result<ExplicitSsp, IoError> {
        Ok(match self {
            ProblemSpec::File(path) => crate::io::load_json(path)?,
            ProblemSpec::Gridworld => gen_gridworld(),
            ProblemSpec::Fig4 => figures::fig4(),
            ProblemSpec::Fig7 => figures::fig7(),
            ProblemSpec::Fig9 => figures::fig9(),
            ProblemSpec::Fig10 => figures::fig10(),
            ProblemSpec::Fig11Chain { n, eps } => figures::fig11_chain(*n, *eps),
            ProblemSpec::TriangleTireworld { n, d } => gen_triangle_tireworld(*n, *d),
            ProblemSpec::Random(p) => gen_random(p),
        })
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::File(path) => write!(f, "{}", path.display()),
            ProblemSpec::Gridworld => f.write_str("gridworld"),
            ProblemSpec::Fig4 => f.write_str("fig4"),
            ProblemSpec::Fig7 => f.write_str("fig7"),
            ProblemSpec::Fig9 => f.write_str("fig9"),
            ProblemSpec::Fig10 => f.write_str("fig10"),
            ProblemSpec::Fig11Chain { n, eps } => write!(f, "fig11:n={n},eps={eps:e}"),
            ProblemSpec::TriangleTireworld { n, d } => write!(f, "tireworld:n={n},d={d}"),
            ProblemSpec::Random(p) => write!(
                f,
                "random:n={},seed={},amin={},amax={},omin={},omax={},cmin={},cmax={},goals={}",
                p.num_states,
                p.seed,
                p.actions_min,
                p.actions_max,
                p.outcomes_min,
                p.outcomes_max,
                p.cost_min,
                p.cost_max,
                p.num_goals
            ),
        }
    }
}

fn parse_param<T: FromStr>(spec: &str, key: &str, value: &str) -> Result<T, SpecError> {
    value.parse().map_err(|_| SpecError { spec: spec.to_string(), message: format!("bad value `{value}` for `{key}`") })
}

/// Parses `kind[:key=value,...]` generator specifications.
///
/// Kinds are `gridworld`, `fig4`, `fig7`, `fig9`, `fig10`, `fig11` (keys `n`,
/// `eps`), `tireworld` (keys `n`, `d`) and `random` (keys `n`, `seed`,
/// `amin`, `amax`, `omin`, `omax`, `cmin`, `cmax`, `goals`). Missing keys
/// take their defaults.
///
/// ```
/// use ssp_cg::domains::ProblemSpec;
///
/// let spec: ProblemSpec = "tireworld:n=2,d=1".parse().unwrap();
/// assert_eq!(spec, ProblemSpec::TriangleTireworld { n: 2, d: 1 });
/// assert_eq!(spec.to_string(), "tireworld:n=2,d=1");
/// assert!("fig8".parse::<ProblemSpec>().is_err());
/// ```
impl FromStr for ProblemSpec {
    type Err = SpecError;

    fn from_str(text: &str) -> Result<Self, SpecError> {
        let err = |message: String| SpecError { spec: text.to_string(), message };
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut pairs = Vec::new();
        for item in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| err(format!("expected key=value, found `{item}`")))?;
            pairs.push((k.trim(), v.trim()));
        }
        let allow = |keys: &[&str]| -> Result<(), SpecError> {
            match pairs.iter().find(|(k, _)| !keys.contains(k)) {
                Some((k, _)) => Err(err(format!("unknown key `{k}` for `{kind}`"))),
                None => Ok(()),
            }
        };
        let spec = match kind {
            "gridworld" => ProblemSpec::Gridworld,
            "fig4" => ProblemSpec::Fig4,
            "fig7" => ProblemSpec::Fig7,
            "fig9" => ProblemSpec::Fig9,
            "fig10" => ProblemSpec::Fig10,
            "fig11" => {
                allow(&["n", "eps"])?;
                let (mut n, mut eps): (usize, f64) = (3, 1e-4);
                for &(k, v) in &pairs {
                    match k {
                        "n" => n = parse_param(text, k, v)?,
                        _ => eps = parse_param(text, k, v)?,
                    }
                }
                if n == 0 || eps.is_nan() || eps < 0.0 {
                    return Err(err("fig11 needs n >= 1 and eps >= 0".to_string()));
                }
                ProblemSpec::Fig11Chain { n, eps }
            }
            "tireworld" => {
                allow(&["n", "d"])?;
                let (mut n, mut d) = (1, 0);
                for &(k, v) in &pairs {
                    match k {
                        "n" => n = parse_param(text, k, v)?,
                        _ => d = parse_param(text, k, v)?,
                    }
                }
                if n == 0 || d > 2 * n {
                    return Err(err("tireworld needs n >= 1 and d <= 2n".to_string()));
                }
                ProblemSpec::TriangleTireworld { n, d }
            }
            "random" => {
                allow(&["n", "seed", "amin", "amax", "omin", "omax", "cmin", "cmax", "goals"])?;
                let mut p = RandomSspParams::default();
                for &(k, v) in &pairs {
                    match k {
                        "n" => p.num_states = parse_param(text, k, v)?,
                        "seed" => p.seed = parse_param(text, k, v)?,
                        "amin" => p.actions_min = parse_param(text, k, v)?,
                        "amax" => p.actions_max = parse_param(text, k, v)?,
                        "omin" => p.outcomes_min = parse_param(text, k, v)?,
                        "omax" => p.outcomes_max = parse_param(text, k, v)?,
                        "cmin" => p.cost_min = parse_param(text, k, v)?,
                        "cmax" => p.cost_max = parse_param(text, k, v)?,
                        _ => p.num_goals = parse_param(text, k, v)?,
                    }
                }
                let ok = p.num_goals >= 1
                    && p.num_goals < p.num_states
                    && 1 <= p.actions_min
                    && p.actions_min <= p.actions_max
                    && 1 <= p.outcomes_min
                    && p.outcomes_min <= p.outcomes_max
                    && 0.0 < p.cost_min
                    && p.cost_min <= p.cost_max;
                if !ok {
                    return Err(err("inconsistent random parameters".to_string()));
                }
                ProblemSpec::Random(p)
            }
            _ => return Err(err(format!("unknown kind `{kind}`"))),
        };
        if matches!(spec, ProblemSpec::Gridworld | ProblemSpec::Fig4 | ProblemSpec::Fig7 | ProblemSpec::Fig9 | ProblemSpec::Fig10)
            && !pairs.is_empty()
        {
            return Err(err(format!("`{kind}` takes no parameters")));
        }
        Ok(spec)
    }
}
