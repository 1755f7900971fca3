//! Per-run statistics and the comparison harness.
//!
//! Every run produces one [`RunRecord`]; records are written as CSV with the
//! fixed header [`CSV_HEADER`]. The last column, `wall_time_secs`, is the
//! only one that depends on timing.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::SolveError;
use crate::heuristics::{Heuristic, HeuristicKind};
use crate::metrics::density_auc;
use crate::model::ExplicitSsp;
use crate::solvers::{solve, Expansion, SolveResult, SolverConfig, SolverKind};

/// Version of the CSV layout; bumped whenever [`CSV_HEADER`] changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// The CSV header line, without a trailing newline.
pub const CSV_HEADER: &str = "problem,solver,expansion,heuristic,elim,seed,status,value_at_initial,\
q_values,heuristic_calls,backups,expansions,constraints_checked,constraints_added,actions_eliminated,\
states,actions,actions_max,density_auc,iterations,value_decrease_events,wall_time_secs";

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    /// The solver converged.
    Solved,
    /// The deadline passed.
    Timeout,
    /// Any other failure.
    Error,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    /// Problem identifier.
    pub problem: String,
    /// Solver name.
    pub solver: String,
    /// Expansion strategy, `-` for value iteration.
    pub expansion: String,
    /// Heuristic name, `-` for value iteration.
    pub heuristic: String,
    /// Whether action elimination was on.
    pub elim: bool,
    /// Seed of the run.
    pub seed: u64,
    /// How the run ended.
    pub status: RunStatus,
    /// `V(s0)`; NaN unless solved.
    pub value_at_initial: f64,
    /// Q-value evaluations.
    pub q_values: u64,
    /// Heuristic evaluations.
    pub heuristic_calls: u64,
    /// Bellman backups.
    pub backups: u64,
    /// State expansions.
    pub expansions: u64,
    /// Constraints checked in repairs.
    pub constraints_checked: u64,
    /// Constraints added by repairs.
    pub constraints_added: u64,
    /// Actions eliminated.
    pub actions_eliminated: u64,
    /// `|Ŝ|`.
    pub states: usize,
    /// `|Â|`.
    pub actions: usize,
    /// `|Â_max|`.
    pub actions_max: usize,
    /// Density AUC of the final partial problem, 1 for value iteration.
    pub density_auc: f64,
    /// Main-loop iterations.
    pub iterations: u64,
    /// Value decreases larger than `η`.
    pub value_decrease_events: u64,
    /// Seconds spent inside the solver.
    pub wall_time_secs: f64,
}

impl RunRecord {
    fn from_result(cell: &Cell, problem: &str, r: &SolveResult, wall: Duration) -> Self {
        let auc = r.partial.as_ref().map_or(1.0, |p| density_auc(cell.ssp_for_auc, p).auc);
        let c = &r.counters;
        RunRecord {
            problem: problem.to_string(),
            solver: cell.solver.name().to_string(),
            expansion: cell.expansion_name(),
            heuristic: cell.heuristic_name(),
            elim: cell.config.elim,
            seed: cell.config.seed,
            status: RunStatus::Solved,
            value_at_initial: r.value_at_initial,
            q_values: c.q_values,
            heuristic_calls: c.heuristic_calls,
            backups: c.backups,
            expansions: c.expansions,
            constraints_checked: c.constraints_checked,
            constraints_added: c.constraints_added,
            actions_eliminated: c.actions_eliminated,
            states: r.partial_sizes.states,
            actions: r.partial_sizes.actions,
            actions_max: r.partial_sizes.actions_max,
            density_auc: auc,
            iterations: r.iterations,
            value_decrease_events: r.value_decrease_events,
            wall_time_secs: wall.as_secs_f64(),
        }
    }

    fn failed(cell: &Cell, problem: &str, status: RunStatus, wall: Duration) -> Self {
        RunRecord {
            problem: problem.to_string(),
            solver: cell.solver.name().to_string(),
            expansion: cell.expansion_name(),
            heuristic: cell.heuristic_name(),
            elim: cell.config.elim,
            seed: cell.config.seed,
            status,
            value_at_initial: f64::NAN,
            q_values: 0,
            heuristic_calls: 0,
            backups: 0,
            expansions: 0,
            constraints_checked: 0,
            constraints_added: 0,
            actions_eliminated: 0,
            states: 0,
            actions: 0,
            actions_max: 0,
            density_auc: f64::NAN,
            iterations: 0,
            value_decrease_events: 0,
            wall_time_secs: wall.as_secs_f64(),
        }
    }
}

/// One solver configuration to run on a problem.
#[derive(Debug, Clone)]
pub struct RunSpec {
    /// Solver family.
    pub solver: SolverKind,
    /// Heuristic for the search solvers.
    pub heuristic: HeuristicKind,
    /// Solver parameters; `expansion` matters for CG-iLAO* only.
    pub config: SolverConfig,
    /// Wall-clock budget.
    pub timeout: Option<Duration>,
}

struct Cell<'a> {
    solver: SolverKind,
    heuristic: HeuristicKind,
    config: &'a SolverConfig,
    ssp_for_auc: &'a ExplicitSsp,
}

impl Cell<'_> {
    fn expansion_name(&self) -> String {
        match self.solver {
            SolverKind::Vi => "-".to_string(),
            SolverKind::Ilao => Expansion::All.name().to_string(),
            SolverKind::CgIlao => self.config.expansion.name().to_string(),
        }
    }

    fn heuristic_name(&self) -> String {
        match self.solver {
            SolverKind::Vi => "-".to_string(),
            _ => self.heuristic.to_string(),
        }
    }
}

/// Runs one configuration and records the outcome.
///
/// Failures become records with status `timeout` or `error`. The recorded
/// wall time covers the solver only, not building the heuristic.
///
/// ```
/// use ssp_cg::bench::{run_cell, RunSpec, RunStatus};
/// use ssp_cg::domains::figures::fig9;
/// use ssp_cg::heuristics::HeuristicKind;
/// use ssp_cg::solvers::{SolverConfig, SolverKind};
///
/// let spec = RunSpec {
///     solver: SolverKind::CgIlao,
///     heuristic: HeuristicKind::Table,
///     config: SolverConfig::default(),
///     timeout: None,
/// };
/// let (rec, _) = run_cell("fig9", &fig9(), &spec);
/// assert_eq!(rec.status, RunStatus::Solved);
/// assert!((rec.value_at_initial - 4.0).abs() < 1e-9);
/// ```
pub fn run_cell(problem: &str, ssp: &ExplicitSsp, spec: &RunSpec) -> (RunRecord, Result<SolveResult, SolveError>) {
    let cell = Cell { solver: spec.solver, heuristic: spec.heuristic, config: &spec.config, ssp_for_auc: ssp };
    let h = match spec.solver {
        SolverKind::Vi => Ok(Heuristic::zero()),
        _ => Heuristic::build(spec.heuristic, ssp),
    };
    let h = match h {
        Ok(h) => h,
        Err(e) => return (RunRecord::failed(&cell, problem, RunStatus::Error, Duration::ZERO), Err(e)),
    };
    let mut config = spec.config.clone();
    let start = Instant::now();
    config.deadline = spec.timeout.map(|t| start + t);
    let result = solve(spec.solver, ssp, &h, &config);
    let wall = start.elapsed();
    let record = match &result {
        Ok(r) => RunRecord::from_result(&cell, problem, r, wall),
        Err(SolveError::Timeout(_)) => RunRecord::failed(&cell, problem, RunStatus::Timeout, wall),
        Err(_) => RunRecord::failed(&cell, problem, RunStatus::Error, wall),
    };
    (record, result)
}

/// The configurations a comparison runs on every problem.
#[derive(Debug, Clone)]
pub struct CompareMatrix {
    /// Solver families.
    pub solvers: Vec<SolverKind>,
    /// Expansion strategies for CG-iLAO*.
    pub expansions: Vec<Expansion>,
    /// Seeds.
    pub seeds: Vec<u64>,
    /// Elimination settings for the search solvers.
    pub elims: Vec<bool>,
    /// Heuristic for the search solvers.
    pub heuristic: HeuristicKind,
    /// Shared parameters; `expansion`, `seed` and `elim` are overridden.
    pub base: SolverConfig,
    /// Per-run wall-clock budget.
    pub timeout: Option<Duration>,
}

impl CompareMatrix {
    /// The run specifications in output order: seeds, then solvers, then
    /// elimination settings, then expansions.
    pub fn specs(&self) -> Vec<RunSpec> {
        let mut out = Vec::new();
        for &seed in &self.seeds {
            for &solver in &self.solvers {
                let elims: &[bool] = if solver == SolverKind::Vi { &[false] } else { &self.elims };
                for &elim in elims {
                    let expansions: Vec<Expansion> = match solver {
                        SolverKind::CgIlao => self.expansions.clone(),
                        _ => vec![Expansion::All],
                    };
                    for expansion in expansions {
                        let config = self.base.clone().expansion(expansion).seed(seed).elim(elim);
                        out.push(RunSpec { solver, heuristic: self.heuristic, config, timeout: self.timeout });
                    }
                }
            }
        }
        out
    }
}

/// Runs every specification of `matrix` on every problem with up to
/// `threads` workers.
///
/// Records come back in problem order, then in [`CompareMatrix::specs`]
/// order, whatever the number of threads.
pub fn compare(problems: &[(String, ExplicitSsp)], matrix: &CompareMatrix, threads: usize) -> Vec<RunRecord> {
    let specs = matrix.specs();
    let jobs: Vec<(usize, usize)> = (0..problems.len()).flat_map(|p| (0..specs.len()).map(move |s| (p, s))).collect();
    let results: Mutex<Vec<Option<RunRecord>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let workers = threads.max(1).min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(p, s)) = jobs.get(i) else { break };
                let (name, ssp) = &problems[p];
                let (record, result) = run_cell(name, ssp, &specs[s]);
                if let Err(e) = result {
                    log::warn!("{name} {}: {e}", specs[s].solver);
                }
                results.lock().expect("no worker panicked")[i] = Some(record);
            });
        }
    });
    results.into_inner().expect("no worker panicked").into_iter().map(|r| r.expect("every job ran")).collect()
}

/// Writes records as CSV, header first.
pub fn write_csv<W: std::io::Write>(out: W, records: &[RunRecord]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-problem agreement and savings of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSummary {
    /// Problem identifier.
    pub problem: String,
    /// Largest difference between solved values.
    pub value_spread: f64,
    /// Runs that did not solve.
    pub unsolved: usize,
    /// For each solved search run: its label and its Q-value and `|Â|`
    /// counts relative to the first iLAO* run without elimination.
    pub ratios: Vec<(String, f64, f64)>,
}

/// Summarises records per problem, keeping the order of first appearance.
pub fn summarize(records: &[RunRecord]) -> Vec<ProblemSummary> {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        if !names.contains(&r.problem.as_str()) {
            names.push(&r.problem);
        }
    }
    names
        .into_iter()
        .map(|name| {
            let rows: Vec<&RunRecord> = records.iter().filter(|r| r.problem == name).collect();
            let solved: Vec<&&RunRecord> = rows.iter().filter(|r| r.status == RunStatus::Solved).collect();
            let lo = solved.iter().map(|r| r.value_at_initial).fold(f64::INFINITY, f64::min);
            let hi = solved.iter().map(|r| r.value_at_initial).fold(f64::NEG_INFINITY, f64::max);
            let reference = solved.iter().find(|r| r.solver == "ilao" && !r.elim);
            let ratios = match reference {
                Some(base) => solved
                    .iter()
                    .filter(|r| r.solver != "vi")
                    .map(|r| {
                        let label = format!("{}/{}/elim={}/seed={}", r.solver, r.expansion, r.elim, r.seed);
                        (label, r.q_values as f64 / base.q_values as f64, r.actions as f64 / base.actions as f64)
                    })
                    .collect(),
                None => Vec::new(),
            };
            ProblemSummary {
                problem: name.to_string(),
                value_spread: if solved.is_empty() { 0.0 } else { hi - lo },
                unsolved: rows.len() - solved.len(),
                ratios,
            }
        })
        .collect()
}
