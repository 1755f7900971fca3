//! `ssp-cg`: solve stochastic shortest path problems and compare solvers.
//!
//! Exit codes: 0 on success, 2 for bad flags, 3 when a problem cannot be
//! loaded, 4 when a solver does not converge or runs out of time, and 1 for
//! anything else. Set `SSP_CG_LOG` (for example `SSP_CG_LOG=debug`) to see
//! solver traces.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ssp_cg::bench::{compare, run_cell, summarize, write_csv, CompareMatrix, RunSpec, RunStatus};
use ssp_cg::domains::ProblemSpec;
use ssp_cg::heuristics::HeuristicKind;
use ssp_cg::io::{export_lp, LinearProgram};
use ssp_cg::model::{apply_fixed_penalty, ExplicitSsp};
use ssp_cg::solvers::{Expansion, SolverConfig, SolverKind};
use ssp_cg::{Heuristic, SolveError};

#[derive(Parser, Debug)]
#[command(name = "ssp-cg", version, about = "Optimal solvers for explicit stochastic shortest path problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem and print its value and statistics.
    Solve(SolveArgs),
    /// Run a matrix of solver configurations and print one CSV row per run.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
struct SolverFlags {
    /// Convergence threshold ε.
    #[arg(long, default_value_t = 1e-4)]
    epsilon: f64,
    /// Value-change threshold η of CG-iLAO*; defaults to ε.
    #[arg(long)]
    eta: Option<f64>,
    /// Step limit of trial expansions.
    #[arg(long = "tmax", default_value_t = 100)]
    t_max: usize,
    /// Give-up penalty D added to every non-goal state; 0 leaves the problem unchanged.
    #[arg(long, default_value_t = 500.0)]
    penalty: f64,
    /// Heuristic for iLAO* and CG-iLAO*; defaults to `table` when the problem has one, else `det-ao`.
    #[arg(long, value_parser = parse_heuristic)]
    heuristic: Option<HeuristicKind>,
    /// Wall-clock budget per solve, in seconds.
    #[arg(long = "timeout-secs")]
    timeout_secs: Option<f64>,
    /// Limit on backup sweeps.
    #[arg(long = "max-iterations", default_value_t = 10_000_000)]
    max_iterations: u64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// JSON problem file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    problem: Option<PathBuf>,
    /// Generated problem, `kind[:key=value,...]`.
    #[arg(long, value_parser = parse_spec)]
    gen: Option<ProblemSpec>,
    /// Solver.
    #[arg(long, default_value = "cgilao", value_parser = parse_solver)]
    solver: SolverKind,
    /// Fringe expansion strategy of CG-iLAO*.
    #[arg(long, default_value = "tied", value_parser = parse_expansion)]
    expansion: Expansion,
    /// Enable action elimination.
    #[arg(long)]
    elim: bool,
    /// Seed of the trial expansion's random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    flags: SolverFlags,
    /// Append the run's CSV row to this file, writing the header if it is new.
    #[arg(long = "stats-out")]
    stats_out: Option<PathBuf>,
    /// Write the Bellman LP of the final partial problem (of the whole problem for VI).
    #[arg(long = "export-lp")]
    export_lp: Option<PathBuf>,
    /// Write a listing of the final partial problem.
    #[arg(long = "dump-partial")]
    dump_partial: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ElimMode {
    Off,
    On,
    Both,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// JSON problem files.
    #[arg(long)]
    problem: Vec<PathBuf>,
    /// Generated problems, `kind[:key=value,...]`.
    #[arg(long, value_parser = parse_spec)]
    gen: Vec<ProblemSpec>,
    /// Solvers, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "vi,ilao,cgilao", value_parser = parse_solver)]
    solver: Vec<SolverKind>,
    /// CG-iLAO* expansion strategies, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "tied,single", value_parser = parse_expansion)]
    expansion: Vec<Expansion>,
    /// Seeds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    /// Action elimination setting of the search solvers.
    #[arg(long, value_enum, default_value_t = ElimMode::Off)]
    elim: ElimMode,
    #[command(flatten)]
    flags: SolverFlags,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Largest tolerated difference between solved values of one problem.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long = "stats-out")]
    stats_out: Option<PathBuf>,
}

fn parse_spec(s: &str) -> Result<ProblemSpec, String> {
    s.parse::<ProblemSpec>().map_err(|e| e.to_string())
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse()
}

fn parse_expansion(s: &str) -> Result<Expansion, String> {
    s.parse::<Expansion>().map_err(|e| e.to_string())
}

fn parse_heuristic(s: &str) -> Result<HeuristicKind, String> {
    s.parse()
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn load(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    fn other(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn solve(e: SolveError) -> Self {
        let code = match e {
            SolveError::NonConvergence(_) | SolveError::Timeout(_) => 4,
            SolveError::InvalidConfig(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn load(spec: &ProblemSpec, penalty: f64) -> Result<ExplicitSsp, Failure> {
    let ssp = spec.build().map_err(|e| Failure::load(e.to_string()))?;
    if penalty == 0.0 {
        return Ok(ssp);
    }
    apply_fixed_penalty(&ssp, penalty).map_err(|e| Failure::usage(e.to_string()))
}

fn config(flags: &SolverFlags, expansion: Expansion, elim: bool, seed: u64) -> Result<SolverConfig, Failure> {
    if flags.penalty < 0.0 || !flags.penalty.is_finite() {
        return Err(Failure::usage("--penalty must be a non-negative number"));
    }
    let mut cfg = SolverConfig::with_epsilon(flags.epsilon).expansion(expansion).elim(elim).seed(seed);
    cfg = cfg.eta(flags.eta.unwrap_or(flags.epsilon));
    cfg.t_max = flags.t_max;
    cfg.max_iterations = flags.max_iterations;
    if flags.penalty > 0.0 {
        cfg.penalty = flags.penalty;
    }
    Ok(cfg)
}

fn timeout(flags: &SolverFlags) -> Result<Option<Duration>, Failure> {
    match flags.timeout_secs {
        None => Ok(None),
        Some(t) if t.is_finite() && t > 0.0 => Ok(Some(Duration::from_secs_f64(t))),
        Some(_) => Err(Failure::usage("--timeout-secs must be positive")),
    }
}

fn heuristic_for(flags: &SolverFlags, ssp: &ExplicitSsp) -> HeuristicKind {
    flags.heuristic.unwrap_or(if ssp.heuristic_table().is_some() {
        HeuristicKind::Table
    } else {
        HeuristicKind::DetAllOutcomes
    })
}

fn run_solve(args: SolveArgs) -> Result<(), Failure> {
    let spec = match (&args.problem, &args.gen) {
        (Some(p), None) => ProblemSpec::File(p.clone()),
        (None, Some(g)) => g.clone(),
        _ => return Err(Failure::usage("give exactly one of --problem and --gen")),
    };
    if args.solver == SolverKind::Vi && args.dump_partial.is_some() {
        return Err(Failure::usage("--dump-partial needs a heuristic-search solver"));
    }
    let cfg = config(&args.flags, args.expansion, args.elim, args.seed)?;
    let ssp = load(&spec, args.flags.penalty)?;
    let heuristic = heuristic_for(&args.flags, &ssp);
    let run = RunSpec { solver: args.solver, heuristic, config: cfg, timeout: timeout(&args.flags)? };
    let id = spec.to_string();
    let (record, result) = run_cell(&id, &ssp, &run);
    if let Some(path) = &args.stats_out {
        append_csv(path, &record)?;
    }
    let r = result.map_err(Failure::solve)?;

    println!("problem: {id}");
    match args.solver {
        SolverKind::Vi => println!("solver: vi"),
        SolverKind::Ilao => println!("solver: ilao (heuristic {heuristic})"),
        SolverKind::CgIlao => println!("solver: cgilao (expansion {}, heuristic {heuristic})", args.expansion),
    }
    println!("V(s0) = {}", r.value_at_initial);
    println!("iterations: {}", r.iterations);
    println!("sweeps: {}", r.sweeps);
    println!("value_decrease_events: {}", r.value_decrease_events);
    let c = &r.counters;
    println!("q_values: {}", c.q_values);
    println!("heuristic_calls: {}", c.heuristic_calls);
    println!("backups: {}", c.backups);
    println!("expansions: {}", c.expansions);
    println!("constraints_checked: {}", c.constraints_checked);
    println!("constraints_added: {}", c.constraints_added);
    println!("actions_eliminated: {}", c.actions_eliminated);
    let ps = r.partial_sizes;
    println!("partial: states {} actions {} actions_max {}", ps.states, ps.actions, ps.actions_max);
    println!("density_auc: {}", record.density_auc);
    println!("econsistent_on_partial: {}", r.terminated_econsistent_on_partial);
    println!("wall_time_secs: {:.6}", record.wall_time_secs);

    if let Some(path) = &args.export_lp {
        let lp = match &r.partial {
            Some(p) => {
                let h = Heuristic::build(heuristic, &ssp).map_err(Failure::solve)?;
                LinearProgram::for_partial(&ssp, p, &h)
            }
            None => LinearProgram::for_ssp(&ssp),
        };
        export_lp(&lp, path).map_err(|e| Failure::other(e.to_string()))?;
    }
    if let (Some(path), Some(p)) = (&args.dump_partial, &r.partial) {
        std::fs::write(path, p.dump(&ssp)).map_err(|e| Failure::other(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn append_csv(path: &PathBuf, record: &ssp_cg::bench::RunRecord) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::other(format!("{}: {e}", path.display()));
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, std::slice::from_ref(record)).map_err(|e| Failure::other(e.to_string()))?;
    let text = String::from_utf8(buf).expect("csv output is UTF-8");
    let body = if fresh { text.as_str() } else { text.split_once('\n').map_or("", |(_, rest)| rest) };
    let mut file = file;
    file.write_all(body.as_bytes()).map_err(io)
}

fn run_compare(args: CompareArgs) -> Result<(), Failure> {
    let elims = match args.elim {
        ElimMode::Off => vec![false],
        ElimMode::On => vec![true],
        ElimMode::Both => vec![false, true],
    };
    let base = config(&args.flags, Expansion::Tied, false, 0)?;
    let mut specs: Vec<ProblemSpec> = args.problem.iter().cloned().map(ProblemSpec::File).collect();
    specs.extend(args.gen.iter().cloned());
    let mut problems = Vec::with_capacity(specs.len());
    for spec in &specs {
        problems.push((spec.to_string(), load(spec, args.flags.penalty)?));
    }
    let heuristics: Vec<HeuristicKind> = problems.iter().map(|(_, ssp)| heuristic_for(&args.flags, ssp)).collect();
    let timeout = timeout(&args.flags)?;
    let mut records = Vec::new();
    for (k, problem) in problems.iter().enumerate() {
        let matrix = CompareMatrix {
            solvers: args.solver.clone(),
            expansions: args.expansion.clone(),
            seeds: args.seed.clone(),
            elims: elims.clone(),
            heuristic: heuristics[k],
            base: base.clone(),
            timeout,
        };
        records.extend(compare(std::slice::from_ref(problem), &matrix, args.threads));
    }
    let mut out = Vec::new();
    write_csv(&mut out, &records).map_err(|e| Failure::other(e.to_string()))?;
    match &args.stats_out {
        Some(path) => std::fs::write(path, &out).map_err(|e| Failure::other(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(&out).map_err(|e| Failure::other(e.to_string()))?,
    }

    let mut disagree = false;
    for s in summarize(&records) {
        let agrees = s.value_spread <= args.tolerance;
        disagree |= !agrees;
        eprintln!(
            "{}: value spread {:e} ({}), {} unsolved",
            s.problem,
            s.value_spread,
            if agrees { "agree" } else { "DISAGREE" },
            s.unsolved
        );
        for (label, q, a) in &s.ratios {
            eprintln!("  {label}: q_values x{q:.3}, |Â| x{a:.3} relative to ilao");
        }
    }
    let unsolved = records.iter().filter(|r| r.status != RunStatus::Solved).count();
    if unsolved > 0 {
        eprintln!("{unsolved} runs did not solve");
    }
    if disagree {
        return Err(Failure::other(format!("solved values differ by more than {:e}", args.tolerance)));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SSP_CG_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Compare(args) => run_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
