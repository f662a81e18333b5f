//! The `cpnet` command line. [`run`] does all the work so it can be driven
//! from tests without spawning a process.
//!
//! Exit codes: 0 for success or a positive answer, 1 for a negative
//! answer, 2 for usage and input errors, 3 when a budget or scale cap stops
//! a query before it is decided.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cpnet::dominance::{self, Answer, Direction, LvfMode, SearchConfig, Strategy};
use cpnet::generators::{self, ClassConstraint, GeneratedInstance, RandomNetParams, Strictness};
use cpnet::io::{format_outcome, parse_assignment, parse_net, parse_outcome, serialize_net};
use cpnet::model::{classify_structure, indifference_safety_lint};
use cpnet::optimize::{enumerate_nondominated, forward_sweep};
use cpnet::oracle::{self, Oracle, OracleConfig, DEFAULT_NODE_CAP};
use cpnet::ordering::{consistent_sort, corollary4_orderable, paired_ordering_query, PairVerdict};
use cpnet::planning::{export_planning, validate_plan, PlanningProblem};
use cpnet::{CpNet, Error, Exec, Outcome};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_LIMIT: usize = 64;
pub const NODE_CAP_VAR: &str = "CPNET_NODE_CAP";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "cpnet", version, about = "Reason about conditional preference networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a net, report its flags and check satisfiability.
    Check {
        file: String,
    },
    /// Print the best outcome, or nondominated outcomes with --all/--limit.
    Optimize {
        file: String,
        #[arg(long, default_value = "")]
        evidence: String,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Decide which of two outcomes may be ranked above the other.
    Order {
        file: String,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Sort outcomes (one per line, `-` for stdin) consistently with the net.
    Sort {
        file: String,
        outcomes: String,
        #[arg(long)]
        sequential: bool,
    },
    /// Ask whether --better dominates --worse.
    Dominance(DominanceArgs),
    /// Report the structural class of the parent graph.
    Classify {
        file: String,
    },
    /// Write the dominance query as a planning problem.
    ExportPlanning {
        file: String,
        #[arg(long)]
        better: String,
        #[arg(long)]
        worse: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Improving)]
        direction: DirectionArg,
    },
    /// Check a plan (one operator name per line) against an exported problem.
    ValidatePlan {
        file: String,
        problem: String,
        plan: String,
    },
    /// Generate an instance family and print it in net syntax.
    Gen(GenArgs),
    /// Brute-force facts from the induced preference graph.
    Oracle {
        file: String,
        #[arg(long)]
        better: Option<String>,
        #[arg(long)]
        worse: Option<String>,
        /// Print every induced-graph edge.
        #[arg(long)]
        dump: bool,
        /// Count rankings that satisfy the net.
        #[arg(long)]
        rankings: bool,
    },
}

#[derive(Args, Debug)]
struct DominanceArgs {
    file: String,
    #[arg(long)]
    better: String,
    #[arg(long)]
    worse: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::Dfs)]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = DirectionArg::Improving)]
    direction: DirectionArg,
    #[arg(long)]
    no_suffix: bool,
    #[arg(long)]
    no_forward_prune: bool,
    #[arg(long, value_enum, default_value_t = LvfArg::Heuristic)]
    lvf: LvfArg,
    /// Allow `--lvf prune` on nets where it may miss sequences.
    #[arg(long)]
    force_lvf: bool,
    #[arg(long)]
    no_tree_dt: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    witness: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// DIMACS clauses, or `-` for stdin.
    #[arg(long)]
    cnf: Option<String>,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    min_domain: usize,
    #[arg(long, default_value_t = 2)]
    max_domain: usize,
    #[arg(long, default_value_t = 2)]
    max_parents: usize,
    #[arg(long, value_enum, default_value_t = ClassArg::Any)]
    class: ClassArg,
    #[arg(long, value_enum, default_value_t = StrictnessArg::Strict)]
    strictness: StrictnessArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    Dfs,
    Bfs,
    Iddfs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DirectionArg {
    Improving,
    Worsening,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LvfArg {
    Off,
    Heuristic,
    Prune,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Theorem13,
    Theorem20,
    Sat3,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ClassArg {
    Any,
    Tree,
    Polytree,
    Dpsc,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrictnessArg {
    Strict,
    Indifference,
    Partial,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Improving => Direction::Improving,
            DirectionArg::Worsening => Direction::Worsening,
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Io<'a> {
    stdin: &'a [u8],
    out: String,
    err: String,
    node_cap: u64,
}

impl Io<'_> {
    fn read(&self, path: &str) -> std::result::Result<String, Failure> {
        if path == "-" {
            return String::from_utf8(self.stdin.to_vec())
                .map_err(|_| Failure::Usage("stdin is not valid UTF-8".into()));
        }
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }

    fn net(&self, path: &str) -> std::result::Result<CpNet, Failure> {
        let text = self.read(path)?;
        parse_net(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }

    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key}: {value}");
    }

    fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            node_cap: self.node_cap,
            ..OracleConfig::default()
        }
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<S: AsRef<str>>(argv: &[S], stdin: &[u8]) -> Output {
    let node_cap = match std::env::var(NODE_CAP_VAR) {
        Ok(v) => match v.trim().parse() {
            Ok(cap) => cap,
            Err(_) => {
                return Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: {NODE_CAP_VAR} must be a non-negative integer\n"),
                }
            }
        },
        Err(_) => DEFAULT_NODE_CAP,
    };
    run_with_cap(argv, stdin, node_cap)
}

/// [`run`] with an explicit oracle node cap instead of the environment.
pub fn run_with_cap<S: AsRef<str>>(argv: &[S], stdin: &[u8], node_cap: u64) -> Output {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut io = Io {
        stdin,
        out: String::new(),
        err: String::new(),
        node_cap,
    };
    let code = match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            2
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(io.err, "error: {e}");
            match e {
                Error::BudgetExhausted { .. } | Error::ScaleExceeded { .. } => 3,
                _ => 2,
            }
        }
    };
    Output {
        code,
        stdout: io.out,
        stderr: io.err,
    }
}

fn execute(command: Command, io: &mut Io) -> CmdResult {
    match command {
        Command::Check { file } => check(io, &file),
        Command::Optimize {
            file,
            evidence,
            all,
            limit,
        } => optimize(io, &file, &evidence, all, limit),
        Command::Order {
            file,
            first,
            second,
        } => order(io, &file, &first, &second),
        Command::Sort {
            file,
            outcomes,
            sequential,
        } => sort(io, &file, &outcomes, sequential),
        Command::Dominance(args) => dominance_cmd(io, args),
        Command::Classify { file } => classify(io, &file),
        Command::ExportPlanning {
            file,
            better,
            worse,
            direction,
        } => {
            let net = io.net(&file)?;
            let (b, w) = (parse_outcome(&better, &net)?, parse_outcome(&worse, &net)?);
            let problem = export_planning(&net, &b, &w, direction.into())?;
            io.out.push_str(&problem.to_text(&net));
            Ok(0)
        }
        Command::ValidatePlan {
            file,
            problem,
            plan,
        } => {
            let net = io.net(&file)?;
            let problem = PlanningProblem::from_text(&io.read(&problem)?, &net)?;
            let plan: Vec<String> = io
                .read(&plan)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            let valid = validate_plan(&problem, &plan)?;
            io.line("valid", valid);
            io.line("steps", plan.len());
            Ok(if valid { 0 } else { 1 })
        }
        Command::Gen(args) => generate(io, args),
        Command::Oracle {
            file,
            better,
            worse,
            dump,
            rankings,
        } => oracle_cmd(io, &file, better, worse, dump, rankings),
    }
}

fn check(io: &mut Io, file: &str) -> CmdResult {
    let net = io.net(file)?;
    let report = net.validate();
    io.line("variables", net.len());
    io.line("acyclic", report.acyclic);
    io.line("strict", report.strict);
    io.line("complete_tables", report.complete_tables);
    io.line("binary", report.binary);
    io.line("well_formed", report.is_well_formed());
    for v in &report.violations {
        io.line("violation", format!("{}: {}", v.variable, v.message));
    }
    if report.violations.is_empty() {
        match Oracle::with_config(&net, &io.oracle_config()).map(|o| o.is_satisfiable()) {
            Ok(sat) => io.line("satisfiable", sat),
            Err(Error::ScaleExceeded { .. }) => io.line("satisfiable", "unknown"),
            Err(e) => return Err(e.into()),
        }
    }
    if report.acyclic {
        for w in indifference_safety_lint(&net)? {
            io.line("warning", &w.message);
        }
    }
    Ok(0)
}

fn optimize(io: &mut Io, file: &str, evidence: &str, all: bool, limit: Option<usize>) -> CmdResult {
    let net = io.net(file)?;
    let z = parse_assignment(evidence, &net, false)?;
    if !all && limit.is_none() && net.require_standard().is_ok() {
        let best = forward_sweep(&net, &z)?;
        let _ = writeln!(io.out, "{}", format_outcome(&net, &best));
        return Ok(0);
    }
    let limit = limit.unwrap_or(DEFAULT_LIMIT);
    for o in enumerate_nondominated(&net, &z, Some(limit))? {
        let _ = writeln!(io.out, "{}", format_outcome(&net, &o));
    }
    Ok(0)
}

fn order(io: &mut Io, file: &str, first: &str, second: &str) -> CmdResult {
    let net = io.net(file)?;
    let (a, b) = (parse_outcome(first, &net)?, parse_outcome(second, &net)?);
    let verdict = paired_ordering_query(&net, &a, &b)?;
    io.line(
        "verdict",
        match verdict {
            PairVerdict::FirstOverSecond => "first-over-second",
            PairVerdict::SecondOverFirst => "second-over-first",
            PairVerdict::BothOrderable => "both-orderable",
        },
    );
    io.line("first_over_second", corollary4_orderable(&net, &a, &b)?);
    io.line("second_over_first", corollary4_orderable(&net, &b, &a)?);
    Ok(0)
}

fn sort(io: &mut Io, file: &str, outcomes: &str, sequential: bool) -> CmdResult {
    let net = io.net(file)?;
    let text = io.read(outcomes)?;
    let list = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_outcome(l, &net))
        .collect::<cpnet::Result<Vec<Outcome>>>()?;
    let exec = if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    for o in consistent_sort(&net, &list, exec)? {
        let _ = writeln!(io.out, "{}", format_outcome(&net, &o));
    }
    Ok(0)
}

fn dominance_cmd(io: &mut Io, a: DominanceArgs) -> CmdResult {
    let net = io.net(&a.file)?;
    let better = parse_outcome(&a.better, &net)?;
    let worse = parse_outcome(&a.worse, &net)?;
    let config = SearchConfig {
        direction: a.direction.into(),
        strategy: match a.strategy {
            StrategyArg::Dfs => Strategy::Dfs,
            StrategyArg::Bfs => Strategy::Bfs,
            StrategyArg::Iddfs => Strategy::Iddfs,
        },
        suffix_fixing: !a.no_suffix,
        forward_pruning: !a.no_forward_prune,
        lvf_mode: match a.lvf {
            LvfArg::Off => LvfMode::Off,
            LvfArg::Heuristic => LvfMode::Heuristic,
            LvfArg::Prune => LvfMode::Prune,
        },
        force_lvf: a.force_lvf,
        node_budget: Some(a.budget),
        use_tree_dt: !a.no_tree_dt,
        ..SearchConfig::default()
    };
    let (code, stats) = match dominance::dominates(&net, &better, &worse, &config) {
        Ok(result) => {
            let code = match &result.answer {
                Answer::Yes(seq) => {
                    io.line("answer", "yes");
                    io.line("length", seq.len());
                    if a.witness {
                        for f in &seq.flips {
                            let _ = writeln!(io.out, "{}", f.describe(&net));
                        }
                    }
                    0
                }
                Answer::No => {
                    io.line("answer", "no");
                    1
                }
            };
            (code, result.stats)
        }
        Err(Error::BudgetExhausted { budget, stats }) => {
            io.line("answer", "unknown");
            let _ = writeln!(io.err, "search budget of {budget} nodes exhausted");
            (3, stats)
        }
        Err(e) => return Err(e.into()),
    };
    if a.stats {
        for l in stats.lines() {
            let _ = writeln!(io.out, "{l}");
        }
    }
    Ok(code)
}

fn classify(io: &mut Io, file: &str) -> CmdResult {
    let net = io.net(file)?;
    let class = classify_structure(&net)?;
    io.line("is_tree", class.is_tree);
    io.line("is_polytree", class.is_polytree);
    io.line("is_dpsc", class.is_dpsc);
    io.line("max_delta", &class.max_delta);
    Ok(0)
}

fn generate(io: &mut Io, a: GenArgs) -> CmdResult {
    let instance = match a.family {
        Family::Theorem13 => generators::gen_theorem13(a.k)?,
        Family::Theorem20 => generators::gen_theorem20(a.k)?,
        Family::Sat3 => {
            let path = a
                .cnf
                .as_deref()
                .ok_or_else(|| Failure::Usage("--family sat3 needs --cnf".into()))?;
            let text = io.read(path)?;
            generators::gen_sat3(&generators::parse_dimacs(&text)?)?
        }
        Family::Random => {
            let params = RandomNetParams {
                n: a.n,
                min_domain: a.min_domain,
                max_domain: a.max_domain,
                max_parents: a.max_parents,
                class: match a.class {
                    ClassArg::Any => ClassConstraint::Any,
                    ClassArg::Tree => ClassConstraint::Tree,
                    ClassArg::Polytree => ClassConstraint::Polytree,
                    ClassArg::Dpsc => ClassConstraint::Dpsc,
                },
                strictness: match a.strictness {
                    StrictnessArg::Strict => Strictness::Strict,
                    StrictnessArg::Indifference => Strictness::WithIndifference,
                    StrictnessArg::Partial => Strictness::Partial,
                },
                seed: a.seed,
            };
            io.out.push_str(&serialize_net(&generators::gen_random(&params)?));
            return Ok(0);
        }
    };
    write_instance(io, &instance);
    Ok(0)
}

fn write_instance(io: &mut Io, inst: &GeneratedInstance) {
    let net = &inst.net;
    let _ = writeln!(io.out, "# instance: {}", inst.name);
    let _ = writeln!(io.out, "# better: {}", format_outcome(net, &inst.better));
    let _ = writeln!(io.out, "# worse: {}", format_outcome(net, &inst.worse));
    if let Some(e) = &inst.expected {
        let _ = writeln!(io.out, "# expected answer: {}", if e.answer { "yes" } else { "no" });
        let _ = writeln!(io.out, "# min length lower bound: {}", e.min_length_lower_bound);
        if let Some((len, note)) = &e.min_length_exact {
            let _ = writeln!(io.out, "# min length exact: {len} ({note})");
        }
    }
    io.out.push_str(&serialize_net(net));
}

fn oracle_cmd(
    io: &mut Io,
    file: &str,
    better: Option<String>,
    worse: Option<String>,
    dump: bool,
    rankings: bool,
) -> CmdResult {
    let net = io.net(file)?;
    let oracle = Oracle::with_config(&net, &io.oracle_config())?;
    let graph = oracle.graph();
    io.line("outcomes", graph.node_count());
    io.line("strict_edges", graph.strict_edge_count());
    io.line("indifferent_edges", graph.indiff_edge_count());
    io.line("satisfiable", oracle.is_satisfiable());
    let mut code = 0;
    match (better, worse) {
        (Some(b), Some(w)) => {
            let (b, w) = (parse_outcome(&b, &net)?, parse_outcome(&w, &net)?);
            let dominates = oracle.dominates(&b, &w)?;
            io.line("dominates", dominates);
            match oracle.min_distance(&b, &w)? {
                Some(d) => io.line("min_distance", d),
                None => io.line("min_distance", "none"),
            }
            if !dominates {
                code = 1;
            }
        }
        (None, None) => {}
        _ => return Err(Failure::Usage("--better and --worse go together".into())),
    }
    if rankings {
        io.line("rankings", oracle::count_satisfying_rankings(&net)?);
    }
    if dump {
        io.out.push_str(&graph.dump(&net));
    }
    Ok(code)
}
