use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::ThresholdCircuit;

use super::params::RestrictionParams;

/// Number of draws tried before settling for the best restriction seen.
pub const MAX_RESAMPLES: usize = 10;

/// A sampled free set together with its exceptional-gate count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledRestriction {
    /// `free[v]` is true when `v` stays unassigned.
    pub free: Vec<bool>,
    pub exceptional: usize,
    pub attempts: usize,
    pub accepted: bool,
}

impl SampledRestriction {
    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }
}

/// Marks each of `n` variables free independently with probability `p`.
pub fn draw_free_set<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<bool> {
    let p = p.clamp(0.0, 1.0);
    (0..n).map(|_| rng.gen_bool(p)).collect()
}

/// Bottom gates with at least two free inputs.
pub fn exceptional_count(circuit: &ThresholdCircuit, free: &[bool]) -> usize {
    circuit
        .bottom()
        .iter()
        .filter(|g| g.inputs().iter().filter(|&&(v, _)| free[v]).nth(1).is_some())
        .count()
}

/// Draws free sets until the exceptional count is within `2 · 3δpn`, giving
/// up after [`MAX_RESAMPLES`] draws and returning the best one seen.
pub fn sample_restriction(
    circuit: &ThresholdCircuit,
    params: &RestrictionParams,
    seed: u64,
) -> SampledRestriction {
    sample_with_probability(circuit, params, params.p_f64(), seed)
}

pub(crate) fn sample_with_probability(
    circuit: &ThresholdCircuit,
    params: &RestrictionParams,
    p: f64,
    seed: u64,
) -> SampledRestriction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = circuit.n_vars();
    let mut best: Option<SampledRestriction> = None;
    for attempt in 1..=MAX_RESAMPLES {
        let free = draw_free_set(n, p, &mut rng);
        let exceptional = exceptional_count(circuit, &free);
        let accepted = params.accepts(exceptional, n);
        let candidate = SampledRestriction {
            free,
            exceptional,
            attempts: attempt,
            accepted,
        };
        if accepted {
            return candidate;
        }
        if best.as_ref().is_none_or(|b| exceptional < b.exceptional) {
            best = Some(candidate);
        }
    }
    let mut best = best.expect("at least one draw");
    best.attempts = MAX_RESAMPLES;
    best
}
