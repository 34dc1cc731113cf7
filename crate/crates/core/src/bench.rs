//! Benchmark records and suites for the `bench` command.

use std::fmt;
use std::time::Instant;

use crate::counters::WorkCounters;
use crate::error::{invalid, Result};
use crate::model::Assignment;
use crate::oracle::{
    brute_circuit_sat, brute_domination, brute_ilp, brute_symmetric, generate, FaninDist, GenKind,
    GenSpec, Instance,
};
use crate::sparse_sat::{solve, SolveOptions};
use crate::splitlist::solve_ilp;
use crate::symsat::{solve_symmetric, SymOptions};
use crate::vecdom::find_dominating_pair;

pub const CSV_HEADER: &str = "id,n,c,solver,verdict,wall_time_ns,assignments,vectors,comparisons,guesses,eq_solves,empirical_exponent";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl Verdict {
    pub fn of<T>(found: &Option<T>) -> Self {
        if found.is_some() {
            Verdict::Sat
        } else {
            Verdict::Unsat
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

/// One solver run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub id: String,
    pub n: usize,
    pub c: u64,
    pub solver: String,
    pub verdict: Verdict,
    pub wall_time_ns: u128,
    pub counters: WorkCounters,
}

impl BenchRecord {
    /// `log2(total basic operations) / n`; 0 for empty instances.
    pub fn empirical_exponent(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (self.counters.total_ops().max(1) as f64).log2() / self.n as f64
    }

    pub fn csv_row(&self) -> String {
        let k = &self.counters;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.6}",
            self.id,
            self.n,
            self.c,
            self.solver,
            self.verdict,
            self.wall_time_ns,
            k.assignments,
            k.vectors,
            k.comparisons,
            k.guesses,
            k.eq_solves,
            self.empirical_exponent()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Circuit,
    Symmetric,
    Ilp,
    Vecdom,
}

impl Suite {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "circuit" => Some(Suite::Circuit),
            "symmetric" => Some(Suite::Symmetric),
            "ilp" => Some(Suite::Ilp),
            "vecdom" => Some(Suite::Vecdom),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub c: u64,
    /// Rows for ILP instances, dimension for vector instances.
    pub rows: usize,
    pub weight_bound: i64,
    pub count: usize,
    pub seed: u64,
    pub distribution: FaninDist,
    pub force_restriction: bool,
    pub threads: usize,
    /// Also run the brute-force oracle on each instance.
    pub baseline: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite, n: usize) -> Self {
        Self {
            suite,
            n,
            c: 1,
            rows: 3,
            weight_bound: 10,
            count: 1,
            seed: 0,
            distribution: FaninDist::Uniform,
            force_restriction: true,
            threads: 1,
            baseline: false,
        }
    }
}

/// Position of `a` in lexicographic order, i.e. the work an enumeration does to reach it.
fn lexicographic_rank(a: &Assignment) -> u64 {
    a.values()
        .iter()
        .fold(0u64, |acc, &v| acc.saturating_mul(a.arity() as u64).saturating_add(v as u64))
}

fn brute_counters(found: &Option<Assignment>, n: usize, arity: u32) -> WorkCounters {
    let assignments = match found {
        Some(a) => lexicographic_rank(a) + 1,
        None => (arity as u64).saturating_pow(n as u32),
    };
    WorkCounters {
        assignments,
        ..WorkCounters::default()
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u128)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_nanos()))
}

/// Runs a suite and returns one record per solver run.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<BenchRecord>> {
    let kind = match cfg.suite {
        Suite::Circuit => GenKind::ThresholdCircuit,
        Suite::Symmetric => GenKind::SymmetricCircuit,
        Suite::Ilp => GenKind::Ilp,
        Suite::Vecdom => GenKind::Vectors,
    };
    let mut out = Vec::new();
    for k in 0..cfg.count {
        let seed = cfg.seed.wrapping_add(k as u64);
        let spec = GenSpec {
            kind,
            n: cfg.n,
            c: cfg.c,
            rows: cfg.rows,
            weight_bound: cfg.weight_bound,
            arity: 2,
            seed,
            distribution: cfg.distribution,
        };
        let id = format!("{}-n{}-s{seed}", suite_tag(cfg.suite), cfg.n);
        let record = |solver: &str, verdict, wall_time_ns, counters| BenchRecord {
            id: id.clone(),
            n: cfg.n,
            c: cfg.c,
            solver: solver.to_string(),
            verdict,
            wall_time_ns,
            counters,
        };
        match generate(&spec)? {
            Instance::Threshold(circuit) => {
                let opts = SolveOptions {
                    force_restriction: cfg.force_restriction,
                    threads: cfg.threads,
                    seed: Some(seed),
                    ..SolveOptions::default()
                };
                let ((w, counters), t) = timed(|| solve(&circuit, &opts))?;
                out.push(record("sparse_sat", Verdict::of(&w), t, counters));
                if cfg.baseline {
                    let (w, t) = timed(|| brute_circuit_sat(&circuit))?;
                    let counters = brute_counters(&w, cfg.n, 2);
                    out.push(record("brute", Verdict::of(&w), t, counters));
                }
            }
            Instance::Symmetric(circuit) => {
                let opts = SymOptions {
                    force_restriction: cfg.force_restriction,
                    threads: cfg.threads,
                    seed: Some(seed),
                    ..SymOptions::default()
                };
                let ((w, counters), t) = timed(|| solve_symmetric(&circuit, &opts))?;
                out.push(record("symsat", Verdict::of(&w), t, counters));
                if cfg.baseline {
                    let (w, t) = timed(|| brute_symmetric(&circuit))?;
                    let counters = brute_counters(&w, cfg.n, 2);
                    out.push(record("brute", Verdict::of(&w), t, counters));
                }
            }
            Instance::Ilp(sys) => {
                let ((w, counters), t) = timed(|| solve_ilp(&sys))?;
                out.push(record("splitlist", Verdict::of(&w), t, counters));
                if cfg.baseline {
                    let (w, t) = timed(|| brute_ilp(&sys))?;
                    let counters = brute_counters(&w, cfg.n, sys.arity());
                    out.push(record("brute", Verdict::of(&w), t, counters));
                }
            }
            Instance::Vectors(inst) => {
                let ((pair, vc), t) = timed(|| find_dominating_pair(&inst))?;
                let counters = WorkCounters {
                    vectors: inst.len() as u64,
                    comparisons: vc.comparisons,
                    recursion_nodes: vc.recursion_nodes,
                    ..WorkCounters::default()
                };
                out.push(record("vecdom", Verdict::of(&pair), t, counters));
                if cfg.baseline {
                    let (pair, t) = timed(|| Ok(brute_domination(&inst)))?;
                    let counters = WorkCounters {
                        vectors: inst.len() as u64,
                        comparisons: (inst.a.len() * inst.b.len()) as u64,
                        ..WorkCounters::default()
                    };
                    out.push(record("all_pairs", Verdict::of(&pair), t, counters));
                }
            }
            Instance::Eq(_) => return Err(invalid("no bench suite for equation systems")),
        }
    }
    Ok(out)
}

fn suite_tag(suite: Suite) -> &'static str {
    match suite {
        Suite::Circuit => "tc2",
        Suite::Symmetric => "sc2",
        Suite::Ilp => "ilp",
        Suite::Vecdom => "vec",
    }
}

/// Header plus one row per record.
pub fn render_table(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
