//! The `bobb` command line.
//!
//! Exit codes: 0 success (for `solve`, a proven complete front), 1 the
//! instance is infeasible (or a solver failure left no answer), 2 input or
//! usage error, 3 time limit with a partial front, 4 a MILP of objective
//! generation timed out, 5 the lattice is too large for the oracle.

use std::cell::RefCell;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bobb_core::bb::{BbConfig, BbError, Checkpoint, NodeEvent, NoObserver, Observer, PresolveFlags, RuleSet, SolveStatus};
use bobb_core::geometry::FrontElement;
use bobb_core::milp::MilpOptions;
use bobb_core::model::Instance;
use bobb_core::oracle::{oracle_front, OracleError, DEFAULT_LATTICE_CAP};
use bobb_core::preprocess::{PreprocessMethod, Rho};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::clock::StdClock;
use crate::events::{EventLog, GapSelection};
use crate::generate::{generate_objective, GenerateError, ObjRule};
use crate::instances::{packing60, toy, ToyShape};
use crate::io::{parse_instance, write_front, write_instance};
use crate::run::{solve, StatsReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TIME_LIMIT: i32 = 3;
pub const EXIT_GENERATE_TIMEOUT: i32 = 4;
pub const EXIT_LATTICE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "bobb", version, about = "Exact branch-and-bound for biobjective mixed-integer linear programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the nondominated set of an instance.
    Solve(SolveArgs),
    /// Replace the second objective of an instance by a generated one.
    Generate(GenerateArgs),
    /// Compute the nondominated set by enumerating every integer assignment.
    Oracle(OracleArgs),
    /// Write a seeded random instance.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PreprocessArg {
    Eps,
    Ws,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoArg {
    Auto,
    Fixed(u32),
}

fn parse_rho(s: &str) -> Result<RhoArg, String> {
    if s == "auto" {
        return Ok(RhoArg::Auto);
    }
    match s.parse::<u32>() {
        Ok(r) if r >= 1 => Ok(RhoArg::Fixed(r)),
        _ => Err(format!("expected `auto` or a positive integer, found `{s}`")),
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file in BOMILP-v1 format.
    pub instance: PathBuf,
    /// Wall-clock limit for the whole solve, in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Limit for each single-objective MILP, in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub milp_time_limit: f64,
    #[arg(long, value_enum, default_value_t = PreprocessArg::Eps)]
    pub preprocess: PreprocessArg,
    /// Preprocessing effort: `auto` or a positive integer.
    #[arg(long, value_parser = parse_rho, default_value = "auto")]
    pub rho: RhoArg,
    /// Split objective space at large gaps between preprocessing points.
    #[arg(long)]
    pub split_gaps: bool,
    /// Smallest gap to split at, as a fraction of the `f1` span.
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    /// Track gap measures during the search.
    #[arg(long, value_enum)]
    pub gap: Option<GapSelection>,
    /// Nodes between gap checkpoints.
    #[arg(long, default_value_t = 25)]
    pub checkpoint_every: usize,
    #[arg(long)]
    pub root_probing: bool,
    #[arg(long)]
    pub no_branch_probing: bool,
    /// Disable duality fixing.
    #[arg(long)]
    pub no_presolve: bool,
    /// Enable singleton-column fixing.
    #[arg(long)]
    pub singleton: bool,
    /// Add disjunction cuts for dominating column pairs.
    #[arg(long)]
    pub dominating_cuts: bool,
    /// Keep level-curve rows from node MILPs in the subtree.
    #[arg(long)]
    pub local_cuts: bool,
    #[arg(long)]
    pub no_pareto_branching: bool,
    /// Recorded in the stats; the solver itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threads for independent objective-space regions.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Front file; standard output if absent.
    #[arg(long)]
    pub out_front: Option<PathBuf>,
    #[arg(long)]
    pub out_stats: Option<PathBuf>,
    /// JSON-lines event log.
    #[arg(long)]
    pub out_log: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub instance: PathBuf,
    /// One of o, a, b, c, d, e.
    #[arg(long)]
    pub rule: ObjRule,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 60.0)]
    pub milp_time_limit: f64,
    /// Output instance; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// Largest number of integer assignments to enumerate.
    #[arg(long, default_value_t = DEFAULT_LATTICE_CAP)]
    pub cap: f64,
    #[arg(long)]
    pub out_front: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Small instances within reach of the oracle.
    Toy,
    /// 60 variables, 60 rows.
    Packing60,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses the process arguments and runs the command.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    let res = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Random(a) => cmd_random(&a),
    };
    match res {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

struct Failure(i32, String);

fn input(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    res.map_err(input)
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(input(format!("--{name} must be positive, got {v}")))
    }
}

/// The solver configuration selected by `a`.
pub fn config(a: &SolveArgs) -> BbConfig {
    let mut cfg = BbConfig::default();
    if let Some(t) = a.time_limit {
        cfg.time_limit = t;
    }
    cfg.milp = MilpOptions {
        time_limit: a.milp_time_limit,
        ..MilpOptions::default()
    };
    cfg.preprocess.method = match a.preprocess {
        PreprocessArg::Eps => PreprocessMethod::Eps,
        PreprocessArg::Ws => PreprocessMethod::Ws,
        PreprocessArg::None => PreprocessMethod::None,
    };
    cfg.preprocess.rho = match a.rho {
        RhoArg::Auto => Rho::Auto,
        RhoArg::Fixed(r) => Rho::Fixed(r),
    };
    cfg.split_gaps = a.split_gaps;
    cfg.theta = a.theta;
    cfg.gap_checkpoints = a.gap.is_some();
    cfg.checkpoint_every = a.checkpoint_every;
    cfg.presolve = PresolveFlags {
        duality: !a.no_presolve,
        singleton: a.singleton,
        dominating_cuts: a.dominating_cuts,
        root_probing: a.root_probing,
        branch_probing: !a.no_branch_probing,
    };
    cfg.rules = RuleSet::all();
    cfg.local_cuts = a.local_cuts;
    cfg.pareto_branching = !a.no_pareto_branching;
    cfg
}

fn cmd_solve(a: &SolveArgs) -> Result<i32, Failure> {
    if let Some(t) = a.time_limit {
        positive("time-limit", t)?;
    }
    positive("milp-time-limit", a.milp_time_limit)?;
    if !(a.theta > 0.0 && a.theta < 1.0) {
        return Err(input(format!("--theta must lie in (0, 1), got {}", a.theta)));
    }
    if a.workers == 0 {
        return Err(input("--workers must be at least 1"));
    }
    if a.checkpoint_every == 0 {
        return Err(input("--checkpoint-every must be at least 1"));
    }
    let inst = read_instance(&a.instance)?;
    let cfg = config(a);
    let gap = a.gap.unwrap_or(GapSelection::Both);
    let clock = StdClock::start();

    let log_file = match &a.out_log {
        Some(p) => Some(fs::File::create(p).map_err(|e| input(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let log = log_file.map(|f| RefCell::new(EventLog::new(io::BufWriter::new(f), clock, gap)));
    let result = match &log {
        Some(l) => solve(&inst, &cfg, a.workers, clock, &mut SharedLog(l), &mut |e| l.borrow_mut().write(e)),
        None => solve(&inst, &cfg, a.workers, clock, &mut NoObserver, &mut |_| {}),
    };
    if let Some(l) = log {
        l.into_inner().finish().map_err(|e| input(format!("event log: {e}")))?;
    }
    let elapsed = bobb_core::clock::Clock::now(&clock);

    let out = match result {
        Ok(out) => out,
        Err(BbError::Infeasible) => {
            return Err(Failure(EXIT_INFEASIBLE, "the instance has no integer-feasible solution".into()));
        }
        Err(BbError::EndpointTimeout) => {
            write_out(a.out_front.as_deref(), "")?;
            eprintln!("time limit reached before the lexicographic endpoints were found; the front is empty");
            return Ok(EXIT_TIME_LIMIT);
        }
    };
    write_out(a.out_front.as_deref(), &write_front(out.store.elements()))?;
    if let Some(p) = &a.out_stats {
        write_out(Some(p), &StatsReport::new(&inst, &out, a.seed, gap).to_json())?;
    }
    eprintln!(
        "{} elements, {} nodes, {:.3} s",
        out.store.elements().len(),
        out.stats.nodes,
        elapsed
    );
    Ok(match out.status {
        SolveStatus::Complete => EXIT_OK,
        SolveStatus::TimeLimit => {
            if let Some(g) = out.stats.final_gap {
                let f = gap.fields(&g);
                eprintln!("time limit reached; remaining gap: {}", serde_json::to_string(&f).unwrap_or_default());
            }
            EXIT_TIME_LIMIT
        }
    })
}

/// Lets the sequential path and the replay of worker events share the log.
struct SharedLog<'a, W: Write>(&'a RefCell<EventLog<W>>);

impl<W: Write> Observer for SharedLog<'_, W> {
    fn node(&mut self, ev: &NodeEvent) {
        self.0.borrow_mut().node(ev);
    }

    fn checkpoint(&mut self, ev: &Checkpoint) {
        self.0.borrow_mut().checkpoint(ev);
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32, Failure> {
    positive("milp-time-limit", a.milp_time_limit)?;
    let mut inst = read_instance(&a.instance)?;
    let opts = MilpOptions {
        time_limit: a.milp_time_limit,
        ..MilpOptions::default()
    };
    let c2 = generate_objective(&inst, a.rule, a.seed, &opts, &StdClock::start()).map_err(|e| {
        let code = match e {
            GenerateError::Timeout => EXIT_GENERATE_TIMEOUT,
            GenerateError::Infeasible | GenerateError::Lp(_) => EXIT_INFEASIBLE,
            GenerateError::Degenerate(_) => EXIT_INPUT,
        };
        Failure(code, e.to_string())
    })?;
    inst.c2 = c2;
    write_out(a.out.as_deref(), &write_instance(&inst))?;
    Ok(EXIT_OK)
}

fn cmd_oracle(a: &OracleArgs) -> Result<i32, Failure> {
    positive("cap", a.cap)?;
    let inst = read_instance(&a.instance)?;
    let store = oracle_front(&inst, a.cap).map_err(|e| match e {
        OracleError::TooLarge { .. } => Failure(EXIT_LATTICE, e.to_string()),
        OracleError::Lp(_) => Failure(EXIT_INFEASIBLE, e.to_string()),
    })?;
    if store.is_empty() {
        return Err(Failure(EXIT_INFEASIBLE, "the instance has no integer-feasible solution".into()));
    }
    let elems: Vec<FrontElement> = store.elements().to_vec();
    write_out(a.out_front.as_deref(), &write_front(&elems))?;
    Ok(EXIT_OK)
}

fn cmd_random(a: &RandomArgs) -> Result<i32, Failure> {
    let inst = match a.family {
        Family::Toy => toy(a.seed, ToyShape::default()),
        Family::Packing60 => packing60(a.seed),
    };
    write_out(a.out.as_deref(), &write_instance(&inst))?;
    Ok(EXIT_OK)
}
