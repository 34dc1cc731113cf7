use num::{BigInt, BigRational, One, Signed, ToPrimitive};

use crate::error::{invalid, Result};
use crate::model::{wire_stats, ThresholdCircuit};

/// `δ = 1/48`, the default exceptional-gate density.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(48))
}

/// `num/den` as a big rational.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Restriction parameters derived from a circuit's wire statistics.
///
/// `ε = δ²/c`, `a = c²/δ²`, `k = a^exponent` from the fan-in separation scan,
/// and each variable stays free with probability `p = δ/(c·k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionParams {
    pub c: BigRational,
    pub delta: BigRational,
    pub epsilon: BigRational,
    pub a: BigRational,
    pub k: BigRational,
    pub k_exponent: u32,
    pub p: BigRational,
}

impl RestrictionParams {
    /// Derives the parameters for `circuit`. `c` is the wire density
    /// `wires / n`, raised to 1 when the circuit is sparser than that.
    pub fn derive(circuit: &ThresholdCircuit, delta: &BigRational) -> Result<Self> {
        if !delta.is_positive() {
            return Err(invalid("delta must be positive"));
        }
        let stats = wire_stats(circuit);
        let n = circuit.n_vars().max(1);
        let density = BigRational::new(BigInt::from(stats.total), BigInt::from(n));
        let c = density.max(BigRational::one());
        let delta_sq = delta * delta;
        let epsilon = &delta_sq / &c;
        let a = &c * &c / &delta_sq;
        let sep = fanin_separation(&stats.fanins, n, &a, &epsilon)?;
        let p = delta / (&c * &sep.k);
        Ok(Self {
            c,
            delta: delta.clone(),
            epsilon,
            a,
            k: sep.k,
            k_exponent: sep.exponent,
            p,
        })
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(0.0).clamp(0.0, 1.0)
    }

    /// The restriction is accepted when the exceptional count is at most `2 · 3δpn`.
    pub fn accepts(&self, exceptional: usize, n: usize) -> bool {
        let bound = BigRational::from_integer(BigInt::from(6 * n)) * &self.delta * &self.p;
        BigRational::from_integer(BigInt::from(exceptional)) <= bound
    }
}

/// Outcome of the fan-in separation scan: `k = a^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaninSeparation {
    pub k: BigRational,
    pub exponent: u32,
}

impl FaninSeparation {
    /// `k ≤ a^(c/ε)`, checked through the exponent since `a > 1`.
    pub fn within_exponent_bound(&self, c: &BigRational, epsilon: &BigRational) -> bool {
        BigRational::from_integer(BigInt::from(self.exponent)) <= c / epsilon
    }
}

/// Total size of the fan-ins `f` with `lo < f ≤ hi`.
pub fn bucket_mass(fanins: &[usize], lo: &BigRational, hi: &BigRational) -> usize {
    fanins
        .iter()
        .filter(|&&f| {
            let f = BigRational::from_integer(BigInt::from(f));
            lo < &f && &f <= hi
        })
        .sum()
}

/// Smallest `k` in `{1, a, a², …}` whose bucket `(k, k·a]` carries at most `ε·n` wires.
pub fn fanin_separation(
    fanins: &[usize],
    n: usize,
    a: &BigRational,
    epsilon: &BigRational,
) -> Result<FaninSeparation> {
    if a <= &BigRational::one() {
        return Err(invalid("fan-in separation needs a > 1"));
    }
    if !epsilon.is_positive() {
        return Err(invalid("fan-in separation needs epsilon > 0"));
    }
    let budget = epsilon * BigRational::from_integer(BigInt::from(n));
    let mut k = BigRational::one();
    let mut exponent = 0u32;
    loop {
        let hi = &k * a;
        let mass = BigRational::from_integer(BigInt::from(bucket_mass(fanins, &k, &hi)));
        if mass <= budget {
            return Ok(FaninSeparation { k, exponent });
        }
        k = hi;
        exponent += 1;
    }
}
