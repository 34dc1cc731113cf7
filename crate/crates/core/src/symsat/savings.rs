use std::collections::BTreeMap;

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

use super::circuit::SymmetricCircuit;

/// Default `κ` in the grid size `I = ⌈κ·c²·log2 max(c, 2)⌉`.
pub const KAPPA: u32 = 64;

/// Cap on the grid size; reached only for `c` above 11 at the default `κ`.
pub const MAX_GRID: u32 = 1 << 15;

const GUARD_BITS: u32 = 64;

/// `c_f` per weighted fan-in `f`: the gates of weighted fan-in `f` carry `c_f·n` wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireDistribution {
    masses: BTreeMap<u64, BigRational>,
}

impl WireDistribution {
    pub fn new(masses: impl IntoIterator<Item = (u64, BigRational)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (f, c_f) in masses {
            if f == 0 {
                return Err(invalid("weighted fan-in must be positive"));
            }
            if c_f.is_negative() {
                return Err(invalid("wire mass must be nonnegative"));
            }
            if !c_f.is_zero() {
                *out.entry(f).or_insert_with(BigRational::zero) += c_f;
            }
        }
        Ok(Self { masses: out })
    }

    pub fn point(f: u64, c_f: BigRational) -> Result<Self> {
        Self::new([(f, c_f)])
    }

    /// `c_{2^j} = 1` for `j = 1..=c`.
    pub fn adversarial(c: u32) -> Self {
        Self {
            masses: (1..=c).map(|j| (1u64 << j, BigRational::one())).collect(),
        }
    }

    pub fn from_circuit(circuit: &SymmetricCircuit) -> Self {
        let n = BigInt::from(circuit.n_vars().max(1));
        let mut masses: BTreeMap<u64, BigRational> = BTreeMap::new();
        for g in circuit.bottom().iter().filter(|g| !g.inputs().is_empty()) {
            let f = g.weighted_fan_in();
            *masses.entry(f).or_insert_with(BigRational::zero) +=
                BigRational::new(BigInt::from(f), n.clone());
        }
        Self { masses }
    }

    pub fn masses(&self) -> &BTreeMap<u64, BigRational> {
        &self.masses
    }

    pub fn total(&self) -> BigRational {
        self.masses.values().sum()
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self {
            masses: self.masses.iter().map(|(&f, m)| (f, m * factor)).collect(),
        }
    }
}

/// A value of the form `rational − Σ coeff·log2(arg)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Savings {
    pub rational: BigRational,
    pub logs: Vec<(BigRational, BigRational)>,
}

impl Savings {
    fn rational(r: BigRational) -> Self {
        Self {
            rational: r,
            logs: Vec::new(),
        }
    }

    /// The exact value when every logarithm is an integer.
    pub fn exact(&self) -> Option<BigRational> {
        let mut v = self.rational.clone();
        for (coeff, arg) in &self.logs {
            v -= coeff * BigRational::from_integer(BigInt::from(exact_log2(arg)?));
        }
        Some(v)
    }

    /// `value·2^bits`, rounded down up to an error of a few units per log term.
    pub fn fixed(&self, bits: u32) -> BigInt {
        let mut v = floor_scaled(&self.rational, bits);
        for (coeff, arg) in &self.logs {
            let lambda = log2_fixed(arg, bits + GUARD_BITS);
            let scaled = coeff.numer() * lambda;
            v -= scaled.div_floor(&(coeff.denom() << GUARD_BITS));
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.exact() {
            return v.to_f64().unwrap_or(f64::NAN);
        }
        let bits = 1200;
        BigRational::new(self.fixed(bits), BigInt::one() << bits)
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Sign of the value, refining the precision until it is unambiguous.
    pub fn signum(&self) -> i32 {
        if let Some(v) = self.exact() {
            return sign_of(v.numer());
        }
        let margin: BigInt = self
            .logs
            .iter()
            .map(|(c, _)| c.abs().ceil().to_integer())
            .sum::<BigInt>()
            * 4
            + 4;
        let mut bits = 128;
        loop {
            let v = self.fixed(bits);
            if v.abs() > margin || bits >= 1 << 16 {
                return sign_of(&v);
            }
            bits *= 2;
        }
    }

    pub fn minus(&self, r: &BigRational) -> Self {
        Self {
            rational: &self.rational - r,
            logs: self.logs.clone(),
        }
    }
}

fn sign_of(v: &BigInt) -> i32 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn floor_scaled(r: &BigRational, bits: u32) -> BigInt {
    (r.numer() << bits).div_floor(r.denom())
}

fn exact_log2_uint(n: &BigUint) -> Option<u64> {
    let e = n.bits().checked_sub(1)?;
    (n.trailing_zeros() == Some(e)).then_some(e)
}

fn exact_log2(x: &BigRational) -> Option<i64> {
    let (num, den) = (x.numer().to_biguint()?, x.denom().to_biguint()?);
    Some(exact_log2_uint(&num)? as i64 - exact_log2_uint(&den)? as i64)
}

/// `log2(n)·2^bits` by repeated squaring of the mantissa; exact for powers of two.
fn log2_uint_fixed(n: &BigUint, bits: u32) -> BigInt {
    let e = n.bits() - 1;
    let whole = BigInt::from(e) << bits;
    if n.trailing_zeros() == Some(e) {
        return whole;
    }
    let f = bits + GUARD_BITS;
    let mut m: BigUint = (n << f) >> e;
    let two = BigUint::one() << (f + 1);
    let mut frac = BigUint::zero();
    for k in 1..=f {
        m = (&m * &m) >> f;
        if m >= two {
            m >>= 1u32;
            frac.set_bit((f - k) as u64, true);
        }
    }
    whole + BigInt::from(frac >> GUARD_BITS)
}

/// `log2(x)·2^bits` for a positive rational.
pub(crate) fn log2_fixed(x: &BigRational, bits: u32) -> BigInt {
    assert!(x.is_positive(), "log2 of a non-positive value");
    let num = x.numer().to_biguint().expect("positive");
    let den = x.denom().to_biguint().expect("positive");
    log2_uint_fixed(&num, bits) - log2_uint_fixed(&den, bits)
}

fn pow2(i: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << i)
}

/// Savings of a single weighted fan-in `f` at free probability `p`:
/// `p/4` when `p·f < 1/(4c)`, else `p/2 − (c/f)·log2(8cpf)`.
pub fn savings(p: &BigRational, f: u64, c: &BigRational) -> Savings {
    let f_r = BigRational::from_integer(BigInt::from(f));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if p * &f_r < &quarter / c {
        return Savings::rational(p * quarter);
    }
    let arg = BigRational::from_integer(BigInt::from(8)) * c * p * &f_r;
    Savings {
        rational: p / BigRational::from_integer(BigInt::from(2)),
        logs: vec![(c / &f_r, arg)],
    }
}

/// `Σ_f (c_f/c)·savings(p, f, c)`.
pub fn expected_savings(p: &BigRational, dist: &WireDistribution, c: &BigRational) -> Savings {
    let mut total = Savings::rational(BigRational::zero());
    for (&f, c_f) in &dist.masses {
        let w = c_f / c;
        let s = savings(p, f, c);
        total.rational += &w * s.rational;
        total
            .logs
            .extend(s.logs.into_iter().map(|(coeff, arg)| (&w * coeff, arg)));
    }
    total
}

/// `I = ⌈κ·c²·log2 max(c, 2)⌉`, capped at [`MAX_GRID`].
pub fn grid_size(c: &BigRational, kappa: u32) -> u32 {
    let two = BigRational::from_integer(BigInt::from(2));
    let base = if c > &two { c.clone() } else { two };
    let bits = 128;
    let lambda = log2_fixed(&base, bits);
    let num = BigInt::from(kappa) * c.numer() * c.numer() * lambda;
    let den = (c.denom() * c.denom()) << bits;
    let size = num.div_ceil(&den);
    size.to_u32().unwrap_or(MAX_GRID).clamp(1, MAX_GRID)
}

/// Expected savings at every grid point `p = 2^-i`, `i = 1..=grid`, as fixed-point
/// values with `scale` fractional bits.
///
/// `log2(8cpf) = log2(8cf) − i` on the grid, so each `log2(8cf)` is computed once
/// and the comparison between grid points uses the same rounding everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSavings {
    pub scale: u32,
    pub values: Vec<BigInt>,
}

impl GridSavings {
    /// `E(2^-i)` as a float.
    pub fn value_f64(&self, i: u32) -> f64 {
        BigRational::new(self.values[i as usize - 1].clone(), BigInt::one() << self.scale)
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

pub fn grid_savings(dist: &WireDistribution, c: &BigRational, grid: u32) -> GridSavings {
    let scale = grid + 128;
    struct Term {
        // w = c_f/c and c_f/f as integer fractions.
        w_num: BigInt,
        w_den: BigInt,
        l_num: BigInt,
        l_den: BigInt,
        lambda: BigInt,
        // First grid index on the p/4 branch: 4cf < 2^i.
        quarter_from: u64,
    }
    let terms: Vec<Term> = dist
        .masses
        .iter()
        .map(|(&f, c_f)| {
            let w = c_f / c;
            let eight_cf = BigRational::from_integer(BigInt::from(8u64) * BigInt::from(f)) * c;
            let four_cf = c.numer() * BigInt::from(4u64) * BigInt::from(f);
            let mut quarter_from = 0u64;
            while (c.denom() << quarter_from) <= four_cf {
                quarter_from += 1;
            }
            Term {
                w_num: w.numer().clone(),
                w_den: w.denom().clone(),
                l_num: c_f.numer().clone(),
                l_den: (c_f.denom() * BigInt::from(f)) << GUARD_BITS,
                lambda: log2_fixed(&eight_cf, scale + GUARD_BITS),
                quarter_from,
            }
        })
        .collect();
    let values = (1..=grid)
        .map(|i| {
            let mut v = BigInt::zero();
            for t in &terms {
                if u64::from(i) >= t.quarter_from {
                    v += (&t.w_num << (scale - i - 2)).div_floor(&t.w_den);
                } else {
                    v += (&t.w_num << (scale - i - 1)).div_floor(&t.w_den);
                    let log = &t.lambda - (BigInt::from(i) << (scale + GUARD_BITS));
                    v -= (&t.l_num * log).div_floor(&t.l_den);
                }
            }
            v
        })
        .collect();
    GridSavings { scale, values }
}

/// Index `i` maximizing the expected savings at `p = 2^-i`; ties go to the larger `p`.
pub fn choose_grid_index(dist: &WireDistribution, c: &BigRational, grid: u32) -> u32 {
    let gs = grid_savings(dist, c, grid);
    let mut best = 0;
    for k in 1..gs.values.len() {
        if gs.values[k] > gs.values[best] {
            best = k;
        }
    }
    best as u32 + 1
}

/// The free probability used by the symmetric solver.
pub fn choose_p(dist: &WireDistribution, c: &BigRational) -> BigRational {
    pow2(choose_grid_index(dist, c, grid_size(c, KAPPA)))
}

/// `p = 2^-i` with probability `A·2^-(I−i+1)` for `i = 1..=I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PDistribution {
    grid: u32,
}

impl PDistribution {
    pub fn new(grid: u32) -> Result<Self> {
        if grid == 0 {
            return Err(invalid("grid size must be positive"));
        }
        Ok(Self { grid })
    }

    pub fn for_density(c: &BigRational) -> Self {
        Self {
            grid: grid_size(c, KAPPA),
        }
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    /// `A = 1/(1 − 2^-I)`.
    pub fn normalization(&self) -> BigRational {
        let two_i = BigInt::one() << self.grid;
        BigRational::new(two_i.clone(), two_i - 1)
    }

    pub fn mass(&self, i: u32) -> BigRational {
        assert!((1..=self.grid).contains(&i));
        self.normalization() * pow2(self.grid - i + 1)
    }

    /// `E_{p~D}[E_f[s_{p,f}]]` with `scale` fractional bits.
    pub fn expected_savings_fixed(&self, dist: &WireDistribution, c: &BigRational) -> (BigInt, u32) {
        let gs = grid_savings(dist, c, self.grid);
        // Σ_i v_i·2^(i−1) / 2^I, times A = 2^I/(2^I − 1).
        let t: BigInt = gs
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v << k)
            .sum();
        let denom = (BigInt::one() << self.grid) - 1;
        (t.div_floor(&denom), gs.scale)
    }

    /// The exact expectation when every logarithm on the grid is an integer.
    pub fn expected_savings_exact(&self, dist: &WireDistribution, c: &BigRational) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for i in 1..=self.grid {
            total += self.mass(i) * expected_savings(&pow2(i), dist, c).exact()?;
        }
        Some(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse_sat::rational;

    fn int(v: i64) -> BigRational {
        rational(v, 1)
    }

    #[test]
    fn worked_values() {
        let s = savings(&rational(1, 16), 1, &int(2));
        assert_eq!(s.exact(), Some(rational(1, 64)));
        assert!(s.logs.is_empty());
        let s = savings(&int(1), 4, &int(1));
        assert_eq!(s.exact(), Some(rational(-3, 4)));
    }

    #[test]
    fn boundary_takes_second_branch() {
        // p·f = 1/(4c) exactly.
        let s = savings(&rational(1, 8), 1, &int(2));
        assert_eq!(s.logs.len(), 1);
        // p/2 − (c/f)·log2(2).
        assert_eq!(s.exact(), Some(rational(1, 16) - int(2)));
    }

    #[test]
    fn log2_fixed_matches_float() {
        for x in [3u64, 5, 7, 10, 1000, 12345] {
            let v = log2_fixed(&int(x as i64), 60);
            let got = v.to_f64().unwrap() / 2f64.powi(60);
            assert!((got - (x as f64).log2()).abs() < 1e-15, "{x}");
        }
        assert_eq!(log2_fixed(&rational(1, 8), 10), BigInt::from(-3 * 1024));
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(grid_size(&int(1), KAPPA), 64);
        assert_eq!(grid_size(&int(2), KAPPA), 256);
        assert_eq!(grid_size(&int(3), KAPPA), 913);
        assert_eq!(grid_size(&int(4), KAPPA), 2048);
        assert_eq!(grid_size(&int(4), 8), 256);
    }

    #[test]
    fn point_distribution_matches_single_savings() {
        let dist = WireDistribution::point(3, rational(1, 2)).unwrap();
        let c = rational(1, 2);
        for i in 1..10 {
            let p = pow2(i);
            assert_eq!(expected_savings(&p, &dist, &c).fixed(80), savings(&p, 3, &c).fixed(80));
        }
    }

    #[test]
    fn grid_values_match_direct_evaluation() {
        let dist = WireDistribution::adversarial(3);
        let c = int(3);
        let gs = grid_savings(&dist, &c, 40);
        for i in 1..=40 {
            let direct = expected_savings(&pow2(i), &dist, &c).fixed(gs.scale);
            let diff = (&direct - &gs.values[i as usize - 1]).abs();
            assert!(diff <= BigInt::from(16), "i = {i}");
        }
    }

    #[test]
    fn frozen_kappa_calibration() {
        for (c, scaled) in [(1u32, rational(23, 4)), (2, rational(85, 8)), (4, rational(2177, 8))] {
            let dist = WireDistribution::adversarial(c);
            let cr = int(c as i64);
            let d = PDistribution::for_density(&cr);
            let exact = d.expected_savings_exact(&dist, &cr).unwrap();
            let i = d.grid();
            assert_eq!(exact * BigRational::from_integer(BigInt::one() << (i + 1)), d.normalization() * scaled);
        }
        let d = PDistribution::for_density(&int(3));
        let (v, scale) = d.expected_savings_fixed(&WireDistribution::adversarial(3), &int(3));
        let got = BigRational::new(v, BigInt::one() << (scale - d.grid() - 1)).to_f64().unwrap();
        let normalized = got / d.normalization().to_f64().unwrap();
        assert!((normalized - 117.945_484_341_646_53).abs() < 1e-9, "{normalized}");
    }

    #[test]
    fn small_kappa_is_negative() {
        for c in 1..=4u32 {
            let cr = int(c as i64);
            let d = PDistribution::new(grid_size(&cr, 8)).unwrap();
            let (v, _) = d.expected_savings_fixed(&WireDistribution::adversarial(c), &cr);
            assert!(v.is_negative(), "c = {c}");
        }
    }

    #[test]
    fn signum_refines() {
        let s = savings(&rational(1, 2), 3, &int(1));
        assert_eq!(s.signum(), -1);
        let s = savings(&rational(1, 64), 3, &int(1));
        assert_eq!(s.signum(), 1);
    }
}
