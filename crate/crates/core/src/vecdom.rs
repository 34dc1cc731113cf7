//! Dominating-pair search between two vector sets.
//!
//! Given `A` and `B` in `Z^d`, find `u ∈ A`, `v ∈ B` with `u_i ≥ v_i` for every
//! coordinate (or `u_i > v_i` on coordinates flagged strict). The search
//! splits `A ∪ B` at the median of the current coordinate and recurses on
//! three sub-problems: the two halves at full dimension, and the pairs whose
//! order on the current coordinate is already settled at one dimension less.
//! The total work is `O(binom(d + log n + 2, d + 1) · n)`.

use num::{BigUint, One};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedVector {
    pub coords: Vec<i64>,
    pub tag: u64,
}

impl TaggedVector {
    pub fn new(coords: Vec<i64>, tag: u64) -> Self {
        Self { coords, tag }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationInstance {
    pub a: Vec<TaggedVector>,
    pub b: Vec<TaggedVector>,
    /// Per coordinate: `true` requires `u_i > v_i` instead of `u_i ≥ v_i`.
    pub strict: Vec<bool>,
}

impl DominationInstance {
    pub fn new(a: Vec<TaggedVector>, b: Vec<TaggedVector>, strict: Vec<bool>) -> Result<Self> {
        let inst = Self { a, b, strict };
        inst.check()?;
        Ok(inst)
    }

    /// Non-strict instance of dimension `d`.
    pub fn non_strict(a: Vec<TaggedVector>, b: Vec<TaggedVector>, d: usize) -> Result<Self> {
        Self::new(a, b, vec![false; d])
    }

    pub fn dim(&self) -> usize {
        self.strict.len()
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    fn check(&self) -> Result<()> {
        let d = self.strict.len();
        for v in self.a.iter().chain(&self.b) {
            if v.coords.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.coords.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VecdomCounters {
    pub recursion_nodes: u64,
    pub comparisons: u64,
    pub median_selections: u64,
}

/// `u` dominates `v` under the given strictness flags.
pub fn dominates(u: &[i64], v: &[i64], strict: &[bool]) -> bool {
    u.iter()
        .zip(v)
        .zip(strict)
        .all(|((x, y), &s)| if s { x > y } else { x >= y })
}

/// Recursion nodes never exceed this multiple of [`count_bound`].
pub const WORK_BOUND_FACTOR: u32 = 8;

/// Returns the tags of some dominating pair `(u ∈ A, v ∈ B)`, or `None`.
pub fn find_dominating_pair(
    inst: &DominationInstance,
) -> Result<(Option<(u64, u64)>, VecdomCounters)> {
    inst.check()?;
    let d = inst.dim();
    let a_flat: Vec<i64> = inst.a.iter().flat_map(|v| v.coords.iter().copied()).collect();
    let b_flat: Vec<i64> = inst.b.iter().flat_map(|v| v.coords.iter().copied()).collect();
    let (found, counters) =
        search_flat(d, &a_flat, inst.a.len(), &b_flat, inst.b.len(), &inst.strict);
    let found = found.map(|(i, j)| {
        let (u, v) = (&inst.a[i], &inst.b[j]);
        assert!(
            dominates(&u.coords, &v.coords, &inst.strict),
            "dominating-pair search returned a non-dominating pair"
        );
        (u.tag, v.tag)
    });
    let n = inst.len() as u64;
    if n > 0 && d > 0 {
        debug_assert!(
            BigUint::from(counters.recursion_nodes) <= count_bound(n, d as u64) * WORK_BOUND_FACTOR,
            "recursion exceeded the work bound"
        );
    }
    Ok((found, counters))
}

/// Search over row-major coordinate buffers holding `na` and `nb` vectors.
/// Returns indices into `A` and `B`.
pub(crate) fn search_flat(
    d: usize,
    a: &[i64],
    na: usize,
    b: &[i64],
    nb: usize,
    strict: &[bool],
) -> (Option<(usize, usize)>, VecdomCounters) {
    debug_assert_eq!(strict.len(), d);
    let n = na + nb;
    let log_n = ceil_log2(n.max(1) as u64) as usize;
    let mut search = Search {
        d,
        a,
        b,
        strict,
        counters: VecdomCounters::default(),
        depth_limit: (d + 1) * (log_n + 2),
    };
    let ai: Vec<u32> = (0..na as u32).collect();
    let bi: Vec<u32> = (0..nb as u32).collect();
    let found = search.recurse(&ai, &bi, 0, 0);
    (
        found.map(|(i, j)| (i as usize, j as usize)),
        search.counters,
    )
}

struct Search<'a> {
    d: usize,
    a: &'a [i64],
    b: &'a [i64],
    strict: &'a [bool],
    counters: VecdomCounters,
    depth_limit: usize,
}

impl Search<'_> {
    #[inline]
    fn ak(&self, i: u32, k: usize) -> i64 {
        self.a[i as usize * self.d + k]
    }

    #[inline]
    fn bk(&self, j: u32, k: usize) -> i64 {
        self.b[j as usize * self.d + k]
    }

    fn recurse(&mut self, a: &[u32], b: &[u32], k: usize, depth: usize) -> Option<(u32, u32)> {
        self.counters.recursion_nodes += 1;
        assert!(
            depth <= self.depth_limit,
            "dominating-pair recursion exceeded its depth bound"
        );
        if a.is_empty() || b.is_empty() {
            return None;
        }
        if k == self.d {
            // Every coordinate is already settled.
            return Some((a[0], b[0]));
        }
        if k + 1 == self.d {
            return self.scan_last(a, b, k);
        }

        let mut keys: Vec<i64> = a
            .iter()
            .map(|&i| self.ak(i, k))
            .chain(b.iter().map(|&j| self.bk(j, k)))
            .collect();
        let mid = keys.len() / 2;
        let median = *keys.select_nth_unstable(mid).1;
        self.counters.median_selections += 1;
        self.counters.comparisons += keys.len() as u64;

        let (mut a_plus, mut a_eq, mut a_minus): (Vec<u32>, Vec<u32>, Vec<u32>) = (Vec::new(), Vec::new(), Vec::new());
        for &i in a {
            match self.ak(i, k).cmp(&median) {
                std::cmp::Ordering::Greater => a_plus.push(i),
                std::cmp::Ordering::Equal => a_eq.push(i),
                std::cmp::Ordering::Less => a_minus.push(i),
            }
        }
        let (mut b_plus, mut b_eq, mut b_minus) = (Vec::new(), Vec::new(), Vec::new());
        for &j in b {
            match self.bk(j, k).cmp(&median) {
                std::cmp::Ordering::Greater => b_plus.push(j),
                std::cmp::Ordering::Equal => b_eq.push(j),
                std::cmp::Ordering::Less => b_minus.push(j),
            }
        }
        self.counters.comparisons += 2 * (a.len() + b.len()) as u64;

        // Both above the median.
        if let Some(hit) = self.recurse(&a_plus, &b_plus, k, depth + 1) {
            return Some(hit);
        }
        // Order on coordinate k is settled: drop it.
        if self.strict[k] {
            let mut b_le = b_eq;
            b_le.extend_from_slice(&b_minus);
            if let Some(hit) = self.recurse(&a_plus, &b_le, k + 1, depth + 1) {
                return Some(hit);
            }
            if let Some(hit) = self.recurse(&a_eq, &b_minus, k + 1, depth + 1) {
                return Some(hit);
            }
        } else {
            let mut a_ge = std::mem::take(&mut a_eq);
            a_ge.append(&mut a_plus);
            let mut b_le = b_eq;
            b_le.extend_from_slice(&b_minus);
            if let Some(hit) = self.recurse(&a_ge, &b_le, k + 1, depth + 1) {
                return Some(hit);
            }
        }
        // Both below the median.
        self.recurse(&a_minus, &b_minus, k, depth + 1)
    }

    /// One coordinate left: the best candidate pair is (max of A, min of B).
    fn scan_last(&mut self, a: &[u32], b: &[u32], k: usize) -> Option<(u32, u32)> {
        let best_a = *a.iter().max_by_key(|&&i| self.ak(i, k)).unwrap();
        let best_b = *b.iter().min_by_key(|&&j| self.bk(j, k)).unwrap();
        self.counters.comparisons += (a.len() + b.len()) as u64;
        let (u, v) = (self.ak(best_a, k), self.bk(best_b, k));
        let ok = if self.strict[k] { u > v } else { u >= v };
        ok.then_some((best_a, best_b))
    }
}

pub(crate) fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Work bound `binom(d + ⌈log2 n⌉ + 2, d + 1) · n` for `n` vectors of dimension `d`.
pub fn count_bound(n: u64, d: u64) -> BigUint {
    binomial(d + ceil_log2(n) as u64 + 2, d + 1) * BigUint::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(coords: &[i64], tag: u64) -> TaggedVector {
        TaggedVector::new(coords.to_vec(), tag)
    }

    #[test]
    fn componentwise_pair_is_found() {
        let inst =
            DominationInstance::non_strict(vec![tv(&[2, 3], 7)], vec![tv(&[1, 3], 9)], 2).unwrap();
        assert_eq!(find_dominating_pair(&inst).unwrap().0, Some((7, 9)));
    }

    #[test]
    fn incomparable_vectors_give_none() {
        let inst = DominationInstance::non_strict(
            vec![tv(&[0, 1], 0), tv(&[1, 0], 1)],
            vec![tv(&[1, 1], 2)],
            2,
        )
        .unwrap();
        assert_eq!(find_dominating_pair(&inst).unwrap().0, None);
    }

    #[test]
    fn strictness_boundary() {
        let a = vec![tv(&[5], 1)];
        let b = vec![tv(&[5], 2)];
        let strict = DominationInstance::new(a.clone(), b.clone(), vec![true]).unwrap();
        assert_eq!(find_dominating_pair(&strict).unwrap().0, None);
        let weak = DominationInstance::new(a, b, vec![false]).unwrap();
        assert_eq!(find_dominating_pair(&weak).unwrap().0, Some((1, 2)));
    }

    #[test]
    fn strict_first_coordinate_pairs_equal_with_smaller() {
        // u_0 = median, v_0 < median: only reachable through the (A=, B-) branch.
        let a = vec![tv(&[3, 0], 0), tv(&[3, 9], 1), tv(&[9, -9], 2)];
        let b = vec![tv(&[2, 5], 10), tv(&[3, 0], 11), tv(&[9, 9], 12)];
        let inst = DominationInstance::new(a, b, vec![true, false]).unwrap();
        assert_eq!(find_dominating_pair(&inst).unwrap().0, Some((1, 10)));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let r = DominationInstance::non_strict(vec![tv(&[1, 2], 0)], vec![tv(&[1], 1)], 2);
        assert_eq!(
            r,
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn zero_dimension_and_empty_sides() {
        let inst = DominationInstance::non_strict(vec![tv(&[], 4)], vec![tv(&[], 5)], 0).unwrap();
        assert_eq!(find_dominating_pair(&inst).unwrap().0, Some((4, 5)));
        let inst = DominationInstance::non_strict(vec![], vec![tv(&[1, 1], 5)], 2).unwrap();
        assert_eq!(find_dominating_pair(&inst).unwrap().0, None);
    }

    #[test]
    fn all_duplicates_terminate() {
        let a: Vec<_> = (0..200).map(|t| tv(&[1, 1, 1], t)).collect();
        let b: Vec<_> = (0..200).map(|t| tv(&[1, 1, 2], 1000 + t)).collect();
        let inst = DominationInstance::non_strict(a, b, 3).unwrap();
        let (found, counters) = find_dominating_pair(&inst).unwrap();
        assert_eq!(found, None);
        assert!(counters.recursion_nodes > 0);
    }

    #[test]
    fn count_bound_closed_form() {
        // binom(1 + 0 + 2, 2) · 1 and binom(1 + 10 + 2, 2) · 1024.
        assert_eq!(count_bound(1, 1), BigUint::from(3u32));
        assert_eq!(count_bound(1024, 1), BigUint::from(79_872u32));
        assert_eq!(count_bound(1025, 1), BigUint::from(91u32 * 1025));
        for n in 1..200u64 {
            for d in 1..8u64 {
                assert!(count_bound(n, d) <= count_bound(n + 1, d));
                assert!(count_bound(n, d) <= count_bound(n, d + 1));
            }
        }
        // Needs more than 64 bits.
        assert!(count_bound(1 << 40, 60).bits() > 64);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }
}
