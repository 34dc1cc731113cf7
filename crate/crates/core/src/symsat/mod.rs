//! Satisfiability of depth-two circuits of symmetric gates.
//!
//! Each variable stays free with a probability `p` chosen from the wire
//! distribution. For every assignment to the other variables, gates left
//! with at most one free input fold into the top gate as affine terms; for
//! the remaining gates the solver guesses the gate value, and each guess
//! (plus a guess of the top value) becomes a system of linear equations
//! solved by subset sum.

mod circuit;
mod linear;
mod savings;

use std::ops::ControlFlow;

use num::{BigRational, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use circuit::{evaluate_symmetric, Predicate, SymmetricCircuit, SymmetricGate};
pub use linear::{
    decode_profile, encode_profile, solve_boolean_linear_system, EqRow, EqSystem, MAX_EQ_HALF_BITS,
};
pub use savings::{
    choose_grid_index, choose_p, expected_savings, grid_savings, grid_size, savings, GridSavings,
    PDistribution, Savings, WireDistribution, KAPPA, MAX_GRID,
};

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::model::{Assignment, Restriction};
use crate::parallel::find_branch;
use crate::sparse_sat::{draw_free_set, instance_seed, DEFAULT_MAX_ASSIGNED, FAST_PATH_MAX_VARS};
use circuit::evaluate_symmetric_unchecked;

/// Default cap on the value tuples examined per branch.
pub const DEFAULT_MAX_TUPLES: u64 = 1 << 22;

/// Largest gate whose subset sums are listed explicitly.
const MAX_LISTED_INPUTS: usize = 24;

#[derive(Debug, Clone)]
pub struct SymOptions {
    pub seed: Option<u64>,
    pub force_restriction: bool,
    pub max_assigned: usize,
    pub threads: usize,
    /// Replaces the planned free probability; also bypasses the savings guard.
    pub p_override: Option<BigRational>,
    pub max_tuples: u64,
}

impl Default for SymOptions {
    fn default() -> Self {
        Self {
            seed: None,
            force_restriction: false,
            max_assigned: DEFAULT_MAX_ASSIGNED,
            threads: 1,
            p_override: None,
            max_tuples: DEFAULT_MAX_TUPLES,
        }
    }
}

/// The free probability chosen for a circuit and its expected savings.
#[derive(Debug, Clone)]
pub struct SymPlan {
    pub c: BigRational,
    pub dist: WireDistribution,
    pub grid: u32,
    pub grid_index: u32,
    pub p: BigRational,
    pub expected: Savings,
}

pub fn plan_symmetric(circuit: &SymmetricCircuit) -> SymPlan {
    let c = BigRational::from_integer(circuit.declared_c().max(1).into());
    let dist = WireDistribution::from_circuit(circuit);
    let grid = grid_size(&c, KAPPA);
    let grid_index = choose_grid_index(&dist, &c, grid);
    let p = BigRational::new(1.into(), num::BigInt::from(1u8) << grid_index);
    let expected = expected_savings(&p, &dist, &c);
    SymPlan {
        c,
        dist,
        grid,
        grid_index,
        p,
        expected,
    }
}

pub fn solve_symmetric(
    circuit: &SymmetricCircuit,
    opts: &SymOptions,
) -> Result<(Option<Assignment>, WorkCounters)> {
    let n = circuit.n_vars();
    if n <= FAST_PATH_MAX_VARS && !opts.force_restriction {
        let mut counters = WorkCounters::default();
        return Ok((exhaustive_symmetric(circuit, &mut counters), counters));
    }
    let p = match &opts.p_override {
        Some(p) => p.clone(),
        None => {
            let plan = plan_symmetric(circuit);
            if plan.expected.signum() <= 0 {
                let mut counters = WorkCounters::default();
                return Ok((exhaustive_symmetric(circuit, &mut counters), counters));
            }
            plan.p
        }
    };

    let seed = opts.seed.unwrap_or_else(|| instance_seed(circuit));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = draw_free_set(n, p.to_f64().unwrap_or(0.0), &mut rng);
    let n_assigned = free.iter().filter(|&&f| !f).count();
    if n_assigned > opts.max_assigned {
        return Err(Error::Guard(format!(
            "{n_assigned} assigned variables exceed the limit of {}",
            opts.max_assigned
        )));
    }

    let (found, counters) = find_branch(1u64 << n_assigned, opts.threads, |bits, counters| {
        counters.branches += 1;
        counters.assignments += 1;
        counters.residual_calls += 1;
        let r = Restriction::from_free_mask(&free, bits);
        let hit = for_each_branch_system(circuit, &r, opts.max_tuples, |sys| {
            counters.guesses += 1;
            let (w, c) = solve_boolean_linear_system(sys)?;
            *counters += c;
            Ok(match w {
                Some(w) => ControlFlow::Break(w),
                None => ControlFlow::Continue(()),
            })
        })?;
        hit.map(|w| r.combine(&w)).transpose()
    })?;

    if let Some(a) = &found {
        assert!(
            evaluate_symmetric(circuit, a)?,
            "symmetric witness does not satisfy the circuit"
        );
    }
    Ok((found, counters))
}

/// Tries every assignment in lexicographic mask order.
pub(crate) fn exhaustive_symmetric(
    circuit: &SymmetricCircuit,
    counters: &mut WorkCounters,
) -> Option<Assignment> {
    let n = circuit.n_vars();
    assert!(n < 64, "exhaustive search over {n} variables");
    let mut values = vec![0u32; n];
    for mask in 0..(1u64 << n) {
        counters.assignments += 1;
        for (i, v) in values.iter_mut().enumerate() {
            *v = ((mask >> i) & 1) as u32;
        }
        if evaluate_symmetric_unchecked(circuit, &values) {
            return Some(Assignment::from_mask(n, mask));
        }
    }
    None
}

/// A gate with at least two free inputs under the current branch.
struct Exceptional<'a> {
    top_weight: i128,
    assigned: i128,
    predicate: &'a Predicate,
    free: Vec<(usize, i64)>,
    sums: Vec<i128>,
}

/// Candidate values of `Σ w_i x_i` over Boolean `x`: the distinct subset sums
/// when there are fewer of those than integers in the range, else the range.
fn candidate_sums(weights: &[i64], limit: u64) -> Result<Vec<i128>> {
    let neg: i128 = weights.iter().map(|&w| (w as i128).min(0)).sum();
    let pos: i128 = weights.iter().map(|&w| (w as i128).max(0)).sum();
    let range = (pos - neg + 1) as u128;
    let l = weights.len();
    if l <= MAX_LISTED_INPUTS && (1u128 << l) <= range {
        let mut sums = vec![0i128];
        for &w in weights {
            let len = sums.len();
            for k in 0..len {
                sums.push(sums[k] + w as i128);
            }
        }
        sums.sort_unstable();
        sums.dedup();
        return Ok(sums);
    }
    if range > limit as u128 {
        return Err(Error::Guard(format!("gate value range of {range} candidates")));
    }
    Ok((neg..=pos).collect())
}

/// Builds every equation system of one branch and hands it to `visit` until it breaks.
///
/// The systems are over the free variables of `r` in ascending order. An
/// assignment `x` to them satisfies the residual circuit iff some visited
/// system accepts `x`.
pub fn for_each_branch_system<T, F>(
    circuit: &SymmetricCircuit,
    r: &Restriction,
    max_tuples: u64,
    mut visit: F,
) -> Result<Option<T>>
where
    F: FnMut(&EqSystem) -> Result<ControlFlow<T>>,
{
    let n = circuit.n_vars();
    if r.n_vars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.n_vars(),
        });
    }
    let mut pos = vec![usize::MAX; n];
    let free_vars = r.free_vars();
    for (k, &v) in free_vars.iter().enumerate() {
        pos[v] = k;
    }

    let mut constant: i128 = 0;
    let mut affine = vec![0i128; free_vars.len()];
    let mut exceptional = Vec::new();
    for (g, &tw) in circuit.bottom().iter().zip(circuit.top_gate_weights()) {
        let tw = tw as i128;
        let mut assigned: i128 = 0;
        let mut free = Vec::new();
        for &(v, w) in g.inputs() {
            match r.value(v) {
                Some(x) => assigned += w as i128 * x as i128,
                None => free.push((pos[v], w)),
            }
        }
        let pred = g.predicate();
        match free.as_slice() {
            [] => constant += tw * pred.holds(assigned) as i128,
            &[(x, w)] => {
                let g0 = pred.holds(assigned) as i128;
                let g1 = pred.holds(assigned + w as i128) as i128;
                constant += tw * g0;
                affine[x] += tw * (g1 - g0);
            }
            _ => {
                let weights: Vec<i64> = free.iter().map(|&(_, w)| w).collect();
                exceptional.push(Exceptional {
                    top_weight: tw,
                    assigned,
                    predicate: pred,
                    sums: candidate_sums(&weights, max_tuples)?,
                    free,
                });
            }
        }
    }
    for &(v, w) in circuit.direct_wires() {
        match r.value(v) {
            Some(x) => constant += w as i128 * x as i128,
            None => affine[pos[v]] += w as i128,
        }
    }
    let top_coeffs = affine
        .iter()
        .enumerate()
        .filter(|(_, &u)| u != 0)
        .map(|(k, &u)| i64::try_from(u).map(|u| (k, u)))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Overflow("folding the top gate"))?;
    let top_weights: Vec<i64> = top_coeffs.iter().map(|&(_, u)| u).collect();
    let top_sums = if top_coeffs.is_empty() {
        vec![0]
    } else {
        candidate_sums(&top_weights, max_tuples)?
    };

    let tuples = exceptional
        .iter()
        .try_fold(top_sums.len() as u128, |acc, e| acc.checked_mul(e.sums.len() as u128));
    if tuples.is_none_or(|t| t > max_tuples as u128) {
        return Err(Error::Guard("too many value tuples in one branch".into()));
    }

    let nf = free_vars.len();
    let mut idx = vec![0usize; exceptional.len()];
    loop {
        let mut top_base = constant;
        let mut rows = Vec::with_capacity(exceptional.len() + 1);
        for (e, &k) in exceptional.iter().zip(&idx) {
            let s = e.sums[k];
            top_base += e.top_weight * e.predicate.holds(e.assigned + s) as i128;
            rows.push(EqRow::new(e.free.clone(), s as i64));
        }
        for &t in &top_sums {
            if !circuit.top().holds(top_base + t) {
                continue;
            }
            let mut rows = rows.clone();
            if !top_coeffs.is_empty() {
                rows.push(EqRow::new(top_coeffs.clone(), t as i64));
            }
            let sys = EqSystem::new(nf, rows)?;
            if let ControlFlow::Break(hit) = visit(&sys)? {
                return Ok(Some(hit));
            }
        }
        // Advance the odometer over the exceptional gates.
        let mut g = 0;
        loop {
            if g == idx.len() {
                return Ok(None);
            }
            idx[g] += 1;
            if idx[g] < exceptional[g].sums.len() {
                break;
            }
            idx[g] = 0;
            g += 1;
        }
    }
}

/// Collects every equation system of one branch.
pub fn branch_systems(circuit: &SymmetricCircuit, r: &Restriction, max_tuples: u64) -> Result<Vec<EqSystem>> {
    let mut out = Vec::new();
    for_each_branch_system::<(), _>(circuit, r, max_tuples, |sys| {
        out.push(sys.clone());
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn set(vals: &[i64]) -> Predicate {
        Predicate::Set(vals.iter().copied().collect())
    }

    fn forced(p: Option<(i64, i64)>) -> SymOptions {
        SymOptions {
            force_restriction: true,
            seed: Some(5),
            p_override: p.map(|(a, b)| BigRational::new(a.into(), b.into())),
            ..SymOptions::default()
        }
    }

    fn brute(c: &SymmetricCircuit) -> Vec<u64> {
        (0..1u64 << c.n_vars())
            .filter(|&m| evaluate_symmetric(c, &Assignment::from_mask(c.n_vars(), m)).unwrap())
            .collect()
    }

    #[test]
    fn parity_pair() {
        let g = SymmetricGate::new(vec![(0, 1), (1, 1)], set(&[1])).unwrap();
        let c = SymmetricCircuit::new(2, vec![g], Predicate::Ge(1), vec![1], vec![], 1).unwrap();
        for opts in [SymOptions::default(), forced(None), forced(Some((1, 1)))] {
            let w = solve_symmetric(&c, &opts).unwrap().0.unwrap();
            assert_eq!(w.values().iter().sum::<u32>(), 1);
        }
    }

    #[test]
    fn unreachable_exact_top() {
        let g1 = SymmetricGate::new(vec![(0, 1)], Predicate::Ge(1)).unwrap();
        let g2 = SymmetricGate::new(vec![(1, -1)], Predicate::Ge(0)).unwrap();
        let c = SymmetricCircuit::new(3, vec![g1, g2], Predicate::Eq(3), vec![1, -1], vec![(2, 1)], 1).unwrap();
        for opts in [SymOptions::default(), forced(None), forced(Some((1, 1))), forced(Some((1, 2)))] {
            assert_eq!(solve_symmetric(&c, &opts).unwrap().0, None);
        }
    }

    fn random_predicate(rng: &mut impl Rng) -> Predicate {
        match rng.gen_range(0..4) {
            0 => Predicate::Ge(rng.gen_range(-3..=4)),
            1 => Predicate::Eq(rng.gen_range(-2..=3)),
            2 => Predicate::Mod {
                modulus: rng.gen_range(2..=3),
                residue: rng.gen_range(0..=2),
            },
            _ => Predicate::Set((0..3).map(|_| rng.gen_range(-4..=4)).collect()),
        }
    }

    fn random_circuit(rng: &mut impl Rng, n: usize, m: usize) -> SymmetricCircuit {
        let mut bottom = Vec::new();
        for _ in 0..m {
            let mut inputs = Vec::new();
            for v in 0..n {
                if rng.gen_bool(0.4) {
                    inputs.push((v, [-2i64, -1, 1, 2][rng.gen_range(0..4)]));
                }
            }
            bottom.push(SymmetricGate::new(inputs, random_predicate(rng)).unwrap());
        }
        let tw = (0..m).map(|_| rng.gen_range(-2..=2)).collect();
        let mut direct = Vec::new();
        for v in 0..n {
            if rng.gen_bool(0.2) {
                direct.push((v, rng.gen_range(1..=2)));
            }
        }
        let top = random_predicate(rng);
        let wires: u64 = bottom.iter().map(SymmetricGate::weighted_fan_in).sum();
        let c = wires.div_ceil(n as u64).max(1);
        SymmetricCircuit::new(n, bottom, top, tw, direct, c).unwrap()
    }

    #[test]
    fn branch_systems_accept_exactly_the_satisfiers() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(0..=3);
            let c = random_circuit(&mut rng, n, m);
            let free: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
            let n_assigned = free.iter().filter(|&&f| !f).count();
            let bits = rng.gen_range(0..1u64 << n_assigned);
            let r = Restriction::from_free_mask(&free, bits);
            let systems = branch_systems(&c, &r, DEFAULT_MAX_TUPLES).unwrap();
            let nf = n - n_assigned;
            for m in 0..1u64 << nf {
                let af = Assignment::from_mask(nf, m);
                let full = r.combine(&af).unwrap();
                let sat = evaluate_symmetric(&c, &full).unwrap();
                assert_eq!(sat, systems.iter().any(|s| s.satisfies(&af)));
            }
        }
    }

    #[test]
    fn restriction_path_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let n = rng.gen_range(1..=9);
            let m = rng.gen_range(0..=4);
            let c = random_circuit(&mut rng, n, m);
            let sat = !brute(&c).is_empty();
            for opts in [forced(None), forced(Some((1, 2))), forced(Some((1, 1)))] {
                let (w, _) = solve_symmetric(&c, &opts).unwrap();
                assert_eq!(w.is_some(), sat);
            }
        }
    }

    #[test]
    fn brute_order_is_lexicographic_by_mask() {
        let g = SymmetricGate::new(vec![(0, 1), (1, 1)], set(&[1])).unwrap();
        let c = SymmetricCircuit::new(2, vec![g], Predicate::Ge(1), vec![1], vec![], 1).unwrap();
        let mut counters = WorkCounters::default();
        let w = exhaustive_symmetric(&c, &mut counters).unwrap();
        assert_eq!(w.values(), &[1, 0]);
        assert_eq!(counters.assignments, 2);
    }
}
