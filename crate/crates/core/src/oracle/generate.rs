use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::model::{ThresholdCircuit, ThresholdGate};
use crate::splitlist::{IneqSystem, Relation, Row};
use crate::symsat::{EqRow, EqSystem, Predicate, SymmetricCircuit, SymmetricGate};
use crate::vecdom::{DominationInstance, TaggedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    ThresholdCircuit,
    SymmetricCircuit,
    Ilp,
    EqSystem,
    Vectors,
}

/// How the `c·n` wire budget is split into bottom gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaninDist {
    /// Fan-ins uniform in `[1, min(n, 2c + 2)]`, the last gate taking the remainder.
    Uniform,
    /// `n` wires in gates of fan-in `2^j` for each `j = 1..=c`.
    AdversarialPow2,
    /// Gates of fan-in `f`, plus one smaller gate for any remainder.
    Fixed(usize),
}

/// Generator parameters. `rows` is the row count for systems and the
/// dimension for vector instances; `c` is unused by those kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub c: u64,
    pub rows: usize,
    pub weight_bound: i64,
    pub arity: u32,
    pub seed: u64,
    pub distribution: FaninDist,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize) -> Self {
        Self {
            kind,
            n,
            c: 1,
            rows: 3,
            weight_bound: 10,
            arity: 2,
            seed: 0,
            distribution: FaninDist::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Threshold(ThresholdCircuit),
    Symmetric(SymmetricCircuit),
    Ilp(IneqSystem),
    Eq(EqSystem),
    Vectors(DominationInstance),
}

/// Gate sizes summing to exactly `c·n`.
pub fn fanin_plan<R: Rng + ?Sized>(dist: FaninDist, n: usize, c: u64, rng: &mut R) -> Result<Vec<usize>> {
    let budget = c as usize * n;
    let mut sizes = Vec::new();
    match dist {
        FaninDist::Fixed(f) => {
            if f == 0 || f > n {
                return Err(invalid(format!("fixed fan-in {f} outside [1, {n}]")));
            }
            sizes.extend(std::iter::repeat_n(f, budget / f));
            if !budget.is_multiple_of(f) {
                sizes.push(budget % f);
            }
        }
        FaninDist::AdversarialPow2 => {
            if c >= 63 || (1usize << c) > n {
                return Err(invalid(format!("adversarial fan-ins up to 2^{c} need n ≥ 2^{c}")));
            }
            for j in 1..=c {
                let f = 1usize << j;
                sizes.extend(std::iter::repeat_n(f, n / f));
                if !n.is_multiple_of(f) {
                    sizes.push(n % f);
                }
            }
        }
        FaninDist::Uniform => {
            let hi = n.min(2 * c as usize + 2).max(1);
            let mut left = budget;
            while left > 0 {
                let f = rng.gen_range(1..=hi).min(left);
                sizes.push(f);
                left -= f;
            }
        }
    }
    debug_assert_eq!(sizes.iter().sum::<usize>(), budget);
    Ok(sizes)
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    let w = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -w
    } else {
        w
    }
}

/// `[Σ negative weights, Σ positive weights]`.
fn span(weights: impl IntoIterator<Item = i64>) -> (i64, i64) {
    weights
        .into_iter()
        .fold((0, 0), |(lo, hi), w| if w < 0 { (lo + w, hi) } else { (lo, hi + w) })
}

fn distinct_vars<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut vars = sample(rng, n, k).into_vec();
    vars.sort_unstable();
    vars
}

fn direct_wires<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Vec<(usize, i64)> {
    (0..n)
        .filter(|_| rng.gen_bool(0.25))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|v| (v, nonzero(rng, bound)))
        .collect()
}

fn threshold_circuit(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<ThresholdCircuit> {
    let wb = spec.weight_bound;
    let mut bottom = Vec::new();
    for f in fanin_plan(spec.distribution, spec.n, spec.c, rng)? {
        let inputs: Vec<(usize, i64)> = distinct_vars(rng, spec.n, f)
            .into_iter()
            .map(|v| (v, nonzero(rng, wb)))
            .collect();
        let (lo, hi) = span(inputs.iter().map(|&(_, w)| w));
        let t = rng.gen_range(lo..=hi + 1);
        bottom.push(ThresholdGate::new(inputs, t)?);
    }
    let top_weights: Vec<i64> = (0..bottom.len()).map(|_| nonzero(rng, wb)).collect();
    let direct = direct_wires(rng, spec.n, wb);
    // Thresholds in the upper half of the top range keep SAT and UNSAT both common.
    let (lo, hi) = span(top_weights.iter().chain(direct.iter().map(|(_, w)| w)).copied());
    let t = rng.gen_range(lo + (hi - lo) / 2..=hi + 1);
    ThresholdCircuit::new(spec.n, bottom, top_weights, direct, t)
}

fn predicate<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> Predicate {
    match rng.gen_range(0..4) {
        0 => Predicate::Ge(rng.gen_range(lo..=hi + 1)),
        1 => Predicate::Eq(rng.gen_range(lo..=hi)),
        2 => {
            let modulus = rng.gen_range(2..=3);
            Predicate::Mod {
                modulus,
                residue: rng.gen_range(0..modulus),
            }
        }
        _ => {
            let k = rng.gen_range(1..=3);
            Predicate::Set((0..k).map(|_| rng.gen_range(lo..=hi)).collect())
        }
    }
}

/// A gate of weighted fan-in exactly `f` with weights bounded by `wb`.
fn weighted_inputs<R: Rng + ?Sized>(rng: &mut R, n: usize, f: usize, wb: i64) -> Result<Vec<(usize, i64)>> {
    let wb = wb as usize;
    let lo = f.div_ceil(wb);
    let hi = f.min(n);
    if lo > hi {
        return Err(invalid(format!(
            "weighted fan-in {f} needs more than {n} inputs of weight ≤ {wb}"
        )));
    }
    let k = rng.gen_range(lo..=hi);
    let mut parts = vec![1usize; k];
    let mut extra = f - k;
    while extra > 0 {
        let i = rng.gen_range(0..k);
        if parts[i] < wb {
            parts[i] += 1;
            extra -= 1;
        }
    }
    Ok(distinct_vars(rng, n, k)
        .into_iter()
        .zip(parts)
        .map(|(v, p)| (v, if rng.gen_bool(0.5) { -(p as i64) } else { p as i64 }))
        .collect())
}

fn symmetric_circuit(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<SymmetricCircuit> {
    let wb = spec.weight_bound;
    let mut bottom = Vec::new();
    for f in fanin_plan(spec.distribution, spec.n, spec.c, rng)? {
        let inputs = weighted_inputs(rng, spec.n, f, wb)?;
        let (lo, hi) = span(inputs.iter().map(|&(_, w)| w));
        let pred = predicate(rng, lo, hi);
        bottom.push(SymmetricGate::new(inputs, pred)?);
    }
    let top_weights: Vec<i64> = (0..bottom.len()).map(|_| nonzero(rng, wb)).collect();
    let direct = direct_wires(rng, spec.n, wb);
    let (lo, hi) = span(top_weights.iter().chain(direct.iter().map(|(_, w)| w)).copied());
    let top = predicate(rng, lo, hi);
    SymmetricCircuit::new(spec.n, bottom, top, top_weights, direct, spec.c.max(1))
}

fn sparse_row<R: Rng + ?Sized>(rng: &mut R, n: usize, wb: i64) -> Vec<(usize, i64)> {
    (0..n)
        .filter(|_| rng.gen_bool(0.7))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|v| (v, nonzero(rng, wb)))
        .collect()
}

fn lhs(coeffs: &[(usize, i64)], point: &[u32]) -> i64 {
    coeffs.iter().map(|&(v, w)| w * point[v] as i64).sum()
}

fn ilp(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<IneqSystem> {
    let rels = [Relation::Ge, Relation::Gt, Relation::Le, Relation::Lt, Relation::Eq];
    let rows = (0..spec.rows)
        .map(|_| {
            let coeffs = sparse_row(rng, spec.n, spec.weight_bound);
            let point: Vec<u32> = (0..spec.n).map(|_| rng.gen_range(0..spec.arity)).collect();
            let rel = rels[rng.gen_range(0..rels.len())];
            let offset = rng.gen_range(-spec.weight_bound..=spec.weight_bound);
            let rhs = lhs(&coeffs, &point) + if rel == Relation::Eq { offset / 4 } else { offset };
            Row::new(coeffs, rel, rhs)
        })
        .collect();
    IneqSystem::new(spec.n, spec.arity, rows)
}

fn eq_system(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<EqSystem> {
    let rows = (0..spec.rows)
        .map(|_| {
            let coeffs = sparse_row(rng, spec.n, spec.weight_bound);
            let rhs = if rng.gen_bool(0.5) {
                let point: Vec<u32> = (0..spec.n).map(|_| rng.gen_range(0..2)).collect();
                lhs(&coeffs, &point)
            } else {
                let (lo, hi) = span(coeffs.iter().map(|&(_, w)| w));
                rng.gen_range(lo..=hi)
            };
            EqRow::new(coeffs, rhs)
        })
        .collect();
    EqSystem::new(spec.n, rows)
}

fn vectors(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<DominationInstance> {
    let d = spec.rows;
    let wb = spec.weight_bound;
    let mut draw = |count: usize| -> Vec<TaggedVector> {
        (0..count as u64)
            .map(|tag| TaggedVector::new((0..d).map(|_| rng.gen_range(-wb..=wb)).collect(), tag))
            .collect()
    };
    let a = draw(spec.n / 2);
    let b = draw(spec.n - spec.n / 2);
    DominationInstance::non_strict(a, b, d)
}

/// Builds the instance described by `spec`; the same spec always yields the same instance.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    if spec.weight_bound < 1 || spec.weight_bound > i32::MAX as i64 {
        return Err(invalid("weight bound must be in [1, 2^31)"));
    }
    if spec.arity < 2 {
        return Err(invalid("arity must be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(match spec.kind {
        GenKind::ThresholdCircuit => Instance::Threshold(threshold_circuit(spec, &mut rng)?),
        GenKind::SymmetricCircuit => Instance::Symmetric(symmetric_circuit(spec, &mut rng)?),
        GenKind::Ilp => Instance::Ilp(ilp(spec, &mut rng)?),
        GenKind::EqSystem => Instance::Eq(eq_system(spec, &mut rng)?),
        GenKind::Vectors => Instance::Vectors(vectors(spec, &mut rng)?),
    })
}
