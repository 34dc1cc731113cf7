use std::ops::{Add, Sub};

use num::{BigInt, Integer, One, ToPrimitive, Zero};

use crate::counters::WorkCounters;
use crate::error::{invalid, Error, Result};
use crate::model::Assignment;
use crate::vecdom::ceil_log2;

/// Largest half handled by the subset-sum join.
pub const MAX_EQ_HALF_BITS: usize = 28;

/// `Σ coeffs = rhs` over Boolean variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EqRow {
    pub coeffs: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl EqRow {
    pub fn new(coeffs: Vec<(usize, i64)>, rhs: i64) -> Self {
        Self { coeffs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EqSystem {
    n_vars: usize,
    rows: Vec<EqRow>,
}

impl EqSystem {
    pub fn new(n_vars: usize, rows: Vec<EqRow>) -> Result<Self> {
        for row in &rows {
            let mut seen: Vec<usize> = row.coeffs.iter().map(|&(v, _)| v).collect();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("duplicate variable in equation"));
            }
            if let Some(&v) = seen.last().filter(|&&v| v >= n_vars) {
                return Err(invalid(format!("variable x{v} out of range for n = {n_vars}")));
            }
        }
        Ok(Self { n_vars, rows })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rows(&self) -> &[EqRow] {
        &self.rows
    }

    /// Row-by-row check of a Boolean assignment.
    pub fn satisfies(&self, a: &Assignment) -> bool {
        a.len() == self.n_vars
            && self.rows.iter().all(|row| {
                let lhs: i128 = row
                    .coeffs
                    .iter()
                    .map(|&(v, w)| w as i128 * a.values()[v] as i128)
                    .sum();
                lhs == row.rhs as i128
            })
    }

    fn max_abs_coeff(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|r| r.coeffs.iter().map(|&(_, w)| w.unsigned_abs()))
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Digit base `2·n·max|w| + 1`. Every row sum of a subset lies strictly
    /// inside `(−B/2, B/2)`, so balanced base-`B` digits never carry.
    pub fn subset_sum_base(&self) -> BigInt {
        BigInt::from(2u8) * BigInt::from(self.n_vars.max(1)) * BigInt::from(self.max_abs_coeff())
            + BigInt::one()
    }
}

/// `Σ_j digits[j]·B^j`.
pub fn encode_profile(digits: &[i128], base: &BigInt) -> BigInt {
    digits
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &d| acc * base + BigInt::from(d))
}

/// Inverse of [`encode_profile`] for digits in `(−B/2, B/2)`.
pub fn decode_profile(value: &BigInt, base: &BigInt, len: usize) -> Vec<i128> {
    let half = base / 2;
    let mut rest = value.clone();
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        let mut d = rest.mod_floor(base);
        if d > half {
            d -= base;
        }
        rest = (rest - &d) / base;
        digits.push(d.to_i128().expect("digit fits"));
    }
    digits
}

/// Sums of every subset of `items`; entry `mask` sums the items whose bit is set.
fn subset_sums<T: Clone + Add<Output = T>>(items: &[T], zero: T) -> Vec<T> {
    let mut sums = Vec::with_capacity(1 << items.len());
    sums.push(zero);
    for item in items {
        let len = sums.len();
        for k in 0..len {
            let s = sums[k].clone() + item.clone();
            sums.push(s);
        }
    }
    sums
}

/// Meet in the middle: finds masks `(l, r)` with `left[l] + right[r] = target`.
fn join<T>(left: &[T], right: &[T], target: &T, zero: T, counters: &mut WorkCounters) -> Option<(u64, u64)>
where
    T: Clone + Ord + Add<Output = T> + Sub<Output = T>,
{
    let ls = subset_sums(left, zero.clone());
    let mut rs: Vec<(T, u64)> = subset_sums(right, zero).into_iter().zip(0u64..).collect();
    counters.vectors += (ls.len() + rs.len()) as u64;
    let log = ceil_log2(rs.len() as u64) as u64;
    rs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    counters.comparisons += rs.len() as u64 * log;
    for (l, sum) in ls.into_iter().enumerate() {
        counters.comparisons += log + 1;
        let need = target.clone() - sum;
        if let Ok(k) = rs.binary_search_by(|probe| probe.0.cmp(&need)) {
            return Some((l as u64, rs[k].1));
        }
    }
    None
}

/// Finds a Boolean solution of `sys` by subset sum over base-`B` encodings.
///
/// Variable `i` becomes `s_i = Σ_j w_{i,j} B^j` and the target is
/// `Σ_j r_j B^j`; the two halves of the variables are listed and joined.
pub fn solve_boolean_linear_system(sys: &EqSystem) -> Result<(Option<Assignment>, WorkCounters)> {
    let mut counters = WorkCounters {
        eq_solves: 1,
        ..WorkCounters::default()
    };
    let n = sys.n_vars;
    let n1 = n.div_ceil(2);
    if n1 > MAX_EQ_HALF_BITS {
        return Err(Error::Guard(format!("equation system over {n} variables")));
    }
    let bound = n as i128 * sys.max_abs_coeff() as i128;
    if sys.rows.iter().any(|r| (r.rhs as i128).abs() > bound) {
        return Ok((None, counters));
    }

    let base = sys.subset_sum_base();
    let mut columns = vec![vec![0i128; sys.rows.len()]; n];
    for (j, row) in sys.rows.iter().enumerate() {
        for &(v, w) in &row.coeffs {
            columns[v][j] = w as i128;
        }
    }
    let rhs: Vec<i128> = sys.rows.iter().map(|r| r.rhs as i128).collect();
    let items: Vec<BigInt> = columns.iter().map(|col| encode_profile(col, &base)).collect();
    let target = encode_profile(&rhs, &base);

    let fits = base.pow(sys.rows.len() as u32) < (BigInt::one() << 120);
    let hit = if fits {
        let small: Vec<i128> = items.iter().map(|s| s.to_i128().expect("fits")).collect();
        let t = target.to_i128().expect("fits");
        join(&small[..n1], &small[n1..], &t, 0, &mut counters)
    } else {
        join(&items[..n1], &items[n1..], &target, BigInt::zero(), &mut counters)
    };

    let witness = hit.map(|(l, r)| Assignment::from_mask(n, l | (r << n1)));
    if let Some(a) = &witness {
        assert!(sys.satisfies(a), "subset-sum witness violates the system");
    }
    Ok((witness, counters))
}
