//! `domsat` command-line front end.
//!
//! Exit status is 10 for SAT and 20 for UNSAT; anything else is an error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use domsat::bench::{render_table, run_suite, Suite, SuiteConfig};
use domsat::format::{emit_instance, parse_circuit, parse_ilp, parse_symmetric};
use domsat::oracle::{brute_circuit_sat, brute_ilp, brute_symmetric, generate};
use domsat::sparse_sat::{solve, SolveOptions};
use domsat::splitlist::solve_ilp;
use domsat::symsat::{solve_symmetric, SymOptions};
use domsat::{Assignment, FaninDist, GenKind, GenSpec, WorkCounters};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

#[derive(Parser)]
#[command(name = "domsat", version, about = "Satisfiability for sparse depth-two threshold circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance with the fast solver.
    Solve(SolveArgs),
    /// Decide an instance by exhaustive enumeration.
    Oracle(SolveArgs),
    /// Write a generated instance to standard output.
    Gen(GenArgs),
    /// Run a benchmark suite and print one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Circuit,
    Symmetric,
    Ilp,
}

#[derive(Args)]
struct SolveArgs {
    format: Format,
    file: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Take the restriction path even on small instances.
    #[arg(long)]
    force_restriction: bool,
    #[arg(long, default_value_t = domsat::sparse_sat::DEFAULT_MAX_ASSIGNED)]
    max_assigned: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Circuit,
    Symmetric,
    Ilp,
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    n: usize,
    /// Wire density: at most c·n wires.
    #[arg(long, default_value_t = 1)]
    c: u64,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    weight_bound: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `uniform`, `adversarial`, or `fixed:<f>`.
    #[arg(long, default_value = "uniform", value_parser = parse_dist)]
    dist: FaninDist,
}

#[derive(Args)]
struct GenArgs {
    kind: Kind,
    #[command(flatten)]
    shape: Shape,
    /// Domain size of ILP variables.
    #[arg(long, default_value_t = 2)]
    arity: u32,
}

#[derive(Args)]
struct BenchArgs {
    /// `circuit`, `symmetric`, `ilp` or `vecdom`.
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[command(flatten)]
    shape: Shape,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Allow the small-instance exhaustive fast path.
    #[arg(long)]
    no_force: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also time the brute-force baseline.
    #[arg(long)]
    baseline: bool,
}

fn parse_dist(s: &str) -> Result<FaninDist, String> {
    match s {
        "uniform" => Ok(FaninDist::Uniform),
        "adversarial" => Ok(FaninDist::AdversarialPow2),
        _ => s
            .strip_prefix("fixed:")
            .and_then(|f| f.parse().ok())
            .map(FaninDist::Fixed)
            .ok_or_else(|| format!("unknown fan-in distribution `{s}`")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| format!("unknown suite `{s}`"))
}

fn witness_string(a: &Assignment) -> String {
    a.values()
        .iter()
        .map(|&v| char::from_digit(v, 36).unwrap_or('?'))
        .collect()
}

fn report_counters(c: &WorkCounters) {
    eprintln!(
        "c assignments={} vectors={} comparisons={} guesses={} eq_solves={} branches={} residual_calls={} \
         fallback_residuals={} recursion_nodes={} total={}",
        c.assignments,
        c.vectors,
        c.comparisons,
        c.guesses,
        c.eq_solves,
        c.branches,
        c.residual_calls,
        c.fallback_residuals,
        c.recursion_nodes,
        c.total_ops()
    );
}

fn answer(found: Option<Assignment>) -> ExitCode {
    match found {
        Some(a) => {
            println!("SAT {}", witness_string(&a));
            ExitCode::from(EXIT_SAT)
        }
        None => {
            println!("UNSAT");
            ExitCode::from(EXIT_UNSAT)
        }
    }
}

fn run_solve(args: &SolveArgs, oracle: bool) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let (found, counters) = match args.format {
        Format::Circuit => {
            let c = parse_circuit(&text)?;
            if oracle {
                (brute_circuit_sat(&c)?, None)
            } else {
                let opts = SolveOptions {
                    seed: args.seed,
                    force_restriction: args.force_restriction,
                    max_assigned: args.max_assigned,
                    threads: args.threads,
                    ..SolveOptions::default()
                };
                let (w, k) = solve(&c, &opts)?;
                (w, Some(k))
            }
        }
        Format::Symmetric => {
            let c = parse_symmetric(&text)?;
            if oracle {
                (brute_symmetric(&c)?, None)
            } else {
                let opts = SymOptions {
                    seed: args.seed,
                    force_restriction: args.force_restriction,
                    max_assigned: args.max_assigned,
                    threads: args.threads,
                    ..SymOptions::default()
                };
                let (w, k) = solve_symmetric(&c, &opts)?;
                (w, Some(k))
            }
        }
        Format::Ilp => {
            let sys = parse_ilp(&text)?;
            if oracle {
                (brute_ilp(&sys)?, None)
            } else {
                let (w, k) = solve_ilp(&sys)?;
                (w, Some(k))
            }
        }
    };
    if let Some(k) = counters {
        report_counters(&k);
    }
    Ok(answer(found))
}

fn spec(kind: GenKind, shape: &Shape, arity: u32) -> GenSpec {
    GenSpec {
        kind,
        n: shape.n,
        c: shape.c,
        rows: shape.rows,
        weight_bound: shape.weight_bound,
        arity,
        seed: shape.seed,
        distribution: shape.dist,
    }
}

fn run_gen(args: &GenArgs) -> Result<ExitCode> {
    let kind = match args.kind {
        Kind::Circuit => GenKind::ThresholdCircuit,
        Kind::Symmetric => GenKind::SymmetricCircuit,
        Kind::Ilp => GenKind::Ilp,
    };
    let inst = generate(&spec(kind, &args.shape, args.arity))?;
    let Some(text) = emit_instance(&inst) else {
        bail!("no text format for this instance kind");
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn run_bench(args: &BenchArgs) -> Result<ExitCode> {
    let s = &args.shape;
    let cfg = SuiteConfig {
        suite: args.suite,
        n: s.n,
        c: s.c,
        rows: s.rows,
        weight_bound: s.weight_bound,
        count: args.count,
        seed: s.seed,
        distribution: s.dist,
        force_restriction: !args.no_force,
        threads: args.threads,
        baseline: args.baseline,
    };
    print!("{}", render_table(&run_suite(&cfg)?));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => run_solve(a, false),
        Command::Oracle(a) => run_solve(a, true),
        Command::Gen(a) => run_gen(a),
        Command::Bench(a) => run_bench(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::FAILURE
    })
}
