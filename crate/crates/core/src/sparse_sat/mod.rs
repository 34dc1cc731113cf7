//! Satisfiability of sparse depth-two threshold circuits.
//!
//! The solver picks a scale `k` by fan-in separation, keeps each variable
//! free with probability `p = δ/(c·k)`, and enumerates every assignment to
//! the remaining variables. Under such an assignment most small gates
//! collapse to constants or literals, so the residual circuit has few bottom
//! gates and goes to [`sat_few_gates`], which guesses the set of firing gates
//! and hands each guess to split-and-list.

mod few_gates;
mod params;
mod restriction;

use std::hash::{DefaultHasher, Hash, Hasher};

use num::{BigInt, BigRational};

pub use few_gates::{guess_system, sat_few_gates, GateSubsetGuess, MAX_FEW_GATES};
pub use params::{
    bucket_mass, default_delta, fanin_separation, rational, FaninSeparation, RestrictionParams,
};
pub use restriction::{
    draw_free_set, exceptional_count, sample_restriction, SampledRestriction, MAX_RESAMPLES,
};

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::model::{evaluate, evaluate_unchecked, simplify, Assignment, Restriction, ThresholdCircuit};
use crate::parallel::find_branch;

/// Instances up to this many variables go straight to exhaustive search
/// unless the restriction path is forced.
pub const FAST_PATH_MAX_VARS: usize = 20;

/// Largest residual searched exhaustively when it has too many gates.
pub const MAX_FALLBACK_VARS: usize = 30;

/// Default cap on the number of assigned (enumerated) variables.
pub const DEFAULT_MAX_ASSIGNED: usize = 30;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Restriction seed; derived from the instance when absent.
    pub seed: Option<u64>,
    /// Skip the small-instance exhaustive fast path.
    pub force_restriction: bool,
    pub max_assigned: usize,
    pub threads: usize,
    pub delta: BigRational,
    /// Overrides the derived free probability `p`.
    pub free_probability: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            seed: None,
            force_restriction: false,
            max_assigned: DEFAULT_MAX_ASSIGNED,
            threads: 1,
            delta: default_delta(),
            free_probability: None,
        }
    }
}

pub(crate) fn instance_seed<T: Hash>(instance: &T) -> u64 {
    let mut h = DefaultHasher::new();
    instance.hash(&mut h);
    h.finish()
}

/// Decides satisfiability; every returned witness satisfies `circuit`.
pub fn solve(
    circuit: &ThresholdCircuit,
    opts: &SolveOptions,
) -> Result<(Option<Assignment>, WorkCounters)> {
    let n = circuit.n_vars();
    if n <= FAST_PATH_MAX_VARS && !opts.force_restriction {
        let mut counters = WorkCounters::default();
        let w = exhaustive(circuit, &mut counters);
        return Ok((w, counters));
    }

    let params = RestrictionParams::derive(circuit, &opts.delta)?;
    let p = opts.free_probability.unwrap_or_else(|| params.p_f64());
    let seed = opts.seed.unwrap_or_else(|| instance_seed(circuit));
    let sample = restriction::sample_with_probability(circuit, &params, p, seed);
    let n_assigned = n - sample.free_count();
    if n_assigned > opts.max_assigned {
        return Err(Error::Guard(format!(
            "{n_assigned} assigned variables exceed the limit of {}",
            opts.max_assigned
        )));
    }

    // Residual gate budget 3δ·|free|, compared as integers.
    let delta_num = opts.delta.numer().clone();
    let delta_den = opts.delta.denom().clone();
    let within_budget = |gates: usize, free: usize| {
        BigInt::from(gates) * &delta_den <= BigInt::from(3 * free) * &delta_num
    };

    let free = &sample.free;
    let (found, counters) = find_branch(1u64 << n_assigned, opts.threads, |bits, counters| {
        counters.branches += 1;
        counters.assignments += 1;
        let r = Restriction::from_free_mask(free, bits);
        let residual = simplify(circuit, &r)?;
        let gates = residual.bottom().len();
        let local = if residual.n_vars() == 0 {
            evaluate_unchecked(&residual, &[]).then(|| Assignment::from_mask(0, 0))
        } else if gates <= MAX_FEW_GATES && within_budget(gates, residual.n_vars()) {
            counters.residual_calls += 1;
            let (w, c) = sat_few_gates(&residual)?;
            *counters += c;
            w
        } else {
            counters.fallback_residuals += 1;
            if residual.n_vars() > MAX_FALLBACK_VARS {
                return Err(Error::Guard(format!(
                    "residual with {} gates over {} free variables",
                    gates,
                    residual.n_vars()
                )));
            }
            exhaustive(&residual, counters)
        };
        local.map(|w| r.combine(&w)).transpose()
    })?;

    if let Some(a) = &found {
        assert!(evaluate(circuit, a)?, "restriction witness does not satisfy the circuit");
    }
    Ok((found, counters))
}

/// Tries every assignment, counting each one.
pub(crate) fn exhaustive(circuit: &ThresholdCircuit, counters: &mut WorkCounters) -> Option<Assignment> {
    let n = circuit.n_vars();
    assert!(n < 64, "exhaustive search over {n} variables");
    let mut values = vec![0u32; n];
    for mask in 0..(1u64 << n) {
        counters.assignments += 1;
        for (i, v) in values.iter_mut().enumerate() {
            *v = ((mask >> i) & 1) as u32;
        }
        if evaluate_unchecked(circuit, &values) {
            return Some(Assignment::from_mask(n, mask));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ThresholdGate;

    fn forced(p: Option<f64>) -> SolveOptions {
        SolveOptions {
            force_restriction: true,
            free_probability: p,
            seed: Some(3),
            ..SolveOptions::default()
        }
    }

    #[test]
    fn contradictory_pair_is_unsat() {
        let g1 = ThresholdGate::new(vec![(0, 1)], 1).unwrap();
        let g2 = ThresholdGate::new(vec![(0, -1)], 0).unwrap();
        let c = ThresholdCircuit::new(1, vec![g1, g2], vec![1, 1], vec![], 2).unwrap();
        for opts in [SolveOptions::default(), forced(None), forced(Some(1.0))] {
            assert_eq!(solve(&c, &opts).unwrap().0, None);
        }
    }

    #[test]
    fn tautology_is_sat_on_zero() {
        let g = ThresholdGate::new(vec![(0, 3), (1, -2)], 1).unwrap();
        let c = ThresholdCircuit::new(2, vec![g], vec![4], vec![(1, 5)], -9).unwrap();
        let (w, _) = solve(&c, &SolveOptions::default()).unwrap();
        assert_eq!(w.unwrap().values(), &[0, 0]);
        for p in [None, Some(0.5), Some(1.0)] {
            assert!(solve(&c, &forced(p)).unwrap().0.is_some());
        }
    }

    #[test]
    fn branch_count_is_exact_on_unsat() {
        let g = ThresholdGate::new(vec![(0, 1), (1, 1), (2, 1)], 4).unwrap();
        let c = ThresholdCircuit::new(3, vec![g], vec![1], vec![], 1).unwrap();
        let (w, counters) = solve(&c, &forced(Some(0.0))).unwrap();
        assert_eq!(w, None);
        assert_eq!(counters.branches, 8);
        assert!(counters.residual_calls <= counters.branches);
    }

    #[test]
    fn assigned_guard() {
        let c = ThresholdCircuit::new(40, vec![], vec![], vec![], 1).unwrap();
        let r = solve(&c, &forced(Some(0.0)));
        assert!(matches!(r, Err(Error::Guard(_))));
    }
}
