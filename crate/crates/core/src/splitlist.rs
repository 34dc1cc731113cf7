//! Feasibility of small linear inequality systems over `{0, …, arity−1}^n`
//! by split-and-list.
//!
//! The variables are split into a low half `S1` and a high half `S2`. Every
//! assignment `α` to `S1` yields the vector `a_j = Σ_{S1} w_ij α_i` and every
//! assignment `β` to `S2` yields `b_j = t_j − Σ_{S2} w_ij β_i`. A full
//! assignment satisfies row `j` exactly when `a_j ≥ b_j`, so the system is
//! feasible iff some `a` dominates some `b`.

use std::fmt;

use crate::counters::WorkCounters;
use crate::error::{invalid, Error, Result};
use crate::model::{Assignment, MAGNITUDE_LIMIT};
use crate::vecdom;

/// Maximum number of normalized rows a system may have.
pub const MAX_ROWS: usize = 62;

/// Default cap on the size of a half list, as a power of two.
pub const DEFAULT_MAX_HALF_BITS: u32 = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Relation::Ge => "ge",
            Relation::Gt => "gt",
            Relation::Le => "le",
            Relation::Lt => "lt",
            Relation::Eq => "eq",
        }
    }

    pub fn from_token(tok: &str) -> Option<Self> {
        Some(match tok {
            "ge" => Relation::Ge,
            "gt" => Relation::Gt,
            "le" => Relation::Le,
            "lt" => Relation::Lt,
            "eq" => Relation::Eq,
            _ => return None,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// `Σ coeffs · x  rel  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<(usize, i64)>,
    pub rel: Relation,
    pub rhs: i64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, i64)>, rel: Relation, rhs: i64) -> Self {
        Self { coeffs, rel, rhs }
    }

    fn lhs(&self, values: &[u32]) -> i128 {
        self.coeffs
            .iter()
            .map(|&(v, w)| w as i128 * values[v] as i128)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IneqSystem {
    n_vars: usize,
    arity: u32,
    rows: Vec<Row>,
}

impl IneqSystem {
    pub fn new(n_vars: usize, arity: u32, rows: Vec<Row>) -> Result<Self> {
        if arity < 2 {
            return Err(invalid(format!("arity {arity} < 2")));
        }
        for (j, row) in rows.iter().enumerate() {
            let mut vars: Vec<usize> = row.coeffs.iter().map(|&(v, _)| v).collect();
            vars.sort_unstable();
            if vars.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("row {j} repeats a variable")));
            }
            if let Some(&v) = vars.last().filter(|&&v| v >= n_vars) {
                return Err(invalid(format!("row {j} reads x{v} but n = {n_vars}")));
            }
            let mag: i128 = row
                .coeffs
                .iter()
                .map(|&(_, w)| (w as i128).abs() * (arity as i128 - 1))
                .sum::<i128>()
                + (row.rhs as i128).abs();
            if mag >= MAGNITUDE_LIMIT {
                return Err(invalid(format!("row {j} exceeds the magnitude bound")));
            }
        }
        Ok(Self {
            n_vars,
            arity,
            rows,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }
}

/// How strict rows (`gt`, `lt`) reach the dominating-pair search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrictMode {
    /// `Σ w x > t` becomes `Σ w x ≥ t + 1`.
    #[default]
    Integral,
    /// The row keeps a strict coordinate in the domination instance.
    Native,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpOptions {
    pub strict_mode: StrictMode,
    /// Refuse systems whose larger half list exceeds `2^max_half_bits` vectors.
    pub max_half_bits: u32,
}

impl Default for IlpOptions {
    fn default() -> Self {
        Self {
            strict_mode: StrictMode::Integral,
            max_half_bits: DEFAULT_MAX_HALF_BITS,
        }
    }
}

/// A row in `Σ w x ≥ t` (or `> t` when `strict`) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedRow {
    pub coeffs: Vec<(usize, i64)>,
    pub rhs: i64,
    pub strict: bool,
}

fn negated(coeffs: &[(usize, i64)]) -> Vec<(usize, i64)> {
    coeffs.iter().map(|&(v, w)| (v, -w)).collect()
}

/// Rewrites every row as `≥` (or strict `>` in [`StrictMode::Native`]);
/// equalities become a `≥`/`≤` pair.
pub fn normalize(sys: &IneqSystem, mode: StrictMode) -> Vec<NormalizedRow> {
    let native = mode == StrictMode::Native;
    let mut out = Vec::with_capacity(sys.rows.len());
    for row in &sys.rows {
        let t = row.rhs;
        match row.rel {
            Relation::Ge => out.push(NormalizedRow {
                coeffs: row.coeffs.clone(),
                rhs: t,
                strict: false,
            }),
            Relation::Le => out.push(NormalizedRow {
                coeffs: negated(&row.coeffs),
                rhs: -t,
                strict: false,
            }),
            Relation::Gt => out.push(NormalizedRow {
                coeffs: row.coeffs.clone(),
                rhs: if native { t } else { t + 1 },
                strict: native,
            }),
            Relation::Lt => out.push(NormalizedRow {
                coeffs: negated(&row.coeffs),
                rhs: if native { -t } else { -t + 1 },
                strict: native,
            }),
            Relation::Eq => {
                out.push(NormalizedRow {
                    coeffs: row.coeffs.clone(),
                    rhs: t,
                    strict: false,
                });
                out.push(NormalizedRow {
                    coeffs: negated(&row.coeffs),
                    rhs: -t,
                    strict: false,
                });
            }
        }
    }
    out
}

/// Exact row-by-row check. Mismatched length or arity is simply `false`.
pub fn verify(sys: &IneqSystem, a: &Assignment) -> bool {
    if a.len() != sys.n_vars || a.arity() != sys.arity {
        return false;
    }
    sys.rows
        .iter()
        .all(|row| row.rel.holds(row.lhs(a.values()), row.rhs as i128))
}

/// Half-list sizes `(arity^⌈n/2⌉, arity^⌊n/2⌋)`, or `None` on `u64` overflow.
pub fn half_list_sizes(n_vars: usize, arity: u32) -> Option<(u64, u64)> {
    let h1 = n_vars.div_ceil(2) as u32;
    let h2 = (n_vars / 2) as u32;
    Some((
        (arity as u64).checked_pow(h1)?,
        (arity as u64).checked_pow(h2)?,
    ))
}

pub fn solve_ilp(sys: &IneqSystem) -> Result<(Option<Assignment>, WorkCounters)> {
    solve_ilp_with(sys, &IlpOptions::default())
}

pub fn solve_ilp_with(
    sys: &IneqSystem,
    opts: &IlpOptions,
) -> Result<(Option<Assignment>, WorkCounters)> {
    let rows = normalize(sys, opts.strict_mode);
    if rows.len() > MAX_ROWS {
        return Err(Error::Guard(format!(
            "{} normalized rows exceed the limit of {MAX_ROWS}",
            rows.len()
        )));
    }
    let n = sys.n_vars;
    let arity = sys.arity;
    let (len_a, len_b) = half_list_sizes(n, arity)
        .filter(|&(la, _)| la <= 1u64 << opts.max_half_bits.min(63))
        .ok_or_else(|| {
            Error::Guard(format!(
                "half list of {arity}^{} vectors exceeds 2^{}",
                n.div_ceil(2),
                opts.max_half_bits
            ))
        })?;
    let h1 = n.div_ceil(2);
    let d = rows.len();

    // Column-major weights: weight[var * d + j].
    let mut weight = vec![0i64; n * d];
    for (j, row) in rows.iter().enumerate() {
        for &(v, w) in &row.coeffs {
            weight[v * d + j] = w;
        }
    }

    let zero = vec![0i64; d];
    let rhs: Vec<i64> = rows.iter().map(|r| r.rhs).collect();
    let list_a = half_list(&zero, &weight, 0..h1, arity, d, 1);
    let list_b = half_list(&rhs, &weight, h1..n, arity, d, -1);
    debug_assert_eq!(list_a.len() as u64, len_a * d as u64);
    debug_assert_eq!(list_b.len() as u64, len_b * d as u64);

    let strict: Vec<bool> = rows.iter().map(|r| r.strict).collect();
    let (found, vc) = vecdom::search_flat(
        d,
        &list_a,
        len_a as usize,
        &list_b,
        len_b as usize,
        &strict,
    );
    let counters = WorkCounters {
        vectors: len_a + len_b,
        comparisons: vc.comparisons,
        recursion_nodes: vc.recursion_nodes,
        ..WorkCounters::default()
    };

    let witness = match found {
        None => None,
        Some((ia, ib)) => {
            let mut values = vec![0u32; n];
            decode_tag(ia as u64, arity, &mut values[..h1]);
            decode_tag(ib as u64, arity, &mut values[h1..]);
            let a = Assignment::new(values, arity)?;
            assert!(verify(sys, &a), "split-and-list witness violates the system");
            Some(a)
        }
    };
    Ok((witness, counters))
}

/// All vectors `base + sign · Σ_{i ∈ vars} w_i · x_i`, in radix-`arity` tag
/// order (the first variable is the least significant digit).
fn half_list(
    base: &[i64],
    weight: &[i64],
    vars: std::ops::Range<usize>,
    arity: u32,
    d: usize,
    sign: i64,
) -> Vec<i64> {
    let total = (arity as usize).pow(vars.len() as u32);
    let mut list = Vec::with_capacity(total * d);
    list.extend_from_slice(base);
    for var in vars {
        let col = &weight[var * d..(var + 1) * d];
        let len = list.len();
        for digit in 1..arity as i64 {
            for k in 0..len {
                let step = sign * digit * col[k % d];
                list.push(list[k] + step);
            }
        }
    }
    list
}

fn decode_tag(mut tag: u64, arity: u32, out: &mut [u32]) {
    for slot in out {
        *slot = (tag % arity as u64) as u32;
        tag /= arity as u64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, arity: u32, rows: Vec<Row>) -> IneqSystem {
        IneqSystem::new(n, arity, rows).unwrap()
    }

    #[test]
    fn unique_satisfier() {
        let s = sys(2, 2, vec![Row::new(vec![(0, 1), (1, 1)], Relation::Ge, 2)]);
        let (w, c) = solve_ilp(&s).unwrap();
        assert_eq!(w.unwrap().values(), &[1, 1]);
        assert_eq!(c.vectors, 4);
    }

    #[test]
    fn contradiction() {
        let s = sys(
            1,
            2,
            vec![
                Row::new(vec![(0, 1)], Relation::Ge, 1),
                Row::new(vec![(0, -1)], Relation::Ge, 0),
            ],
        );
        assert_eq!(solve_ilp(&s).unwrap().0, None);
    }

    #[test]
    fn capacitated() {
        let s = sys(2, 3, vec![Row::new(vec![(0, 1), (1, 1)], Relation::Ge, 4)]);
        let (w, c) = solve_ilp(&s).unwrap();
        assert_eq!(w.unwrap().values(), &[2, 2]);
        assert_eq!(c.vectors, 6);
    }

    #[test]
    fn odd_split_counts() {
        let s = sys(5, 3, vec![Row::new(vec![(4, 1)], Relation::Eq, 2)]);
        let (w, c) = solve_ilp(&s).unwrap();
        assert_eq!(w.unwrap().values()[4], 2);
        assert_eq!(c.vectors, 27 + 9);
    }

    #[test]
    fn strict_modes_agree_on_boundary() {
        for rel in [Relation::Gt, Relation::Lt] {
            for rhs in -1..=3 {
                let s = sys(2, 2, vec![Row::new(vec![(0, 1), (1, 1)], rel, rhs)]);
                let a = solve_ilp_with(&s, &IlpOptions::default()).unwrap().0;
                let b = solve_ilp_with(
                    &s,
                    &IlpOptions {
                        strict_mode: StrictMode::Native,
                        ..IlpOptions::default()
                    },
                )
                .unwrap()
                .0;
                assert_eq!(a.is_some(), b.is_some(), "{rel} {rhs}");
            }
        }
    }

    #[test]
    fn empty_system_and_no_variables() {
        let s = sys(3, 2, vec![]);
        assert!(solve_ilp(&s).unwrap().0.is_some());
        let s = sys(0, 2, vec![Row::new(vec![], Relation::Le, -1)]);
        let (w, c) = solve_ilp(&s).unwrap();
        assert_eq!(w, None);
        assert_eq!(c.vectors, 2);
    }

    #[test]
    fn guards() {
        let rows: Vec<Row> = (0..32)
            .map(|_| Row::new(vec![(0, 1)], Relation::Eq, 0))
            .collect();
        assert!(matches!(solve_ilp(&sys(1, 2, rows)), Err(Error::Guard(_))));
        let big = sys(60, 2, vec![]);
        assert!(matches!(solve_ilp(&big), Err(Error::Guard(_))));
        assert!(IneqSystem::new(2, 2, vec![Row::new(vec![(2, 1)], Relation::Ge, 0)]).is_err());
        assert!(IneqSystem::new(2, 1, vec![]).is_err());
        assert!(
            IneqSystem::new(2, 2, vec![Row::new(vec![(1, 1), (1, 2)], Relation::Ge, 0)]).is_err()
        );
    }

    #[test]
    fn verify_is_exact() {
        let s = sys(2, 2, vec![Row::new(vec![(0, 2), (1, -1)], Relation::Eq, 1)]);
        assert!(verify(&s, &Assignment::boolean(&[true, true])));
        assert!(!verify(&s, &Assignment::boolean(&[true, false])));
        assert!(!verify(&s, &Assignment::boolean(&[true])));
    }
}
