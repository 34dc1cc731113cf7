//! Depth-two threshold circuits, assignments and restrictions.
//!
//! A circuit has a layer of bottom threshold gates over `n` variables and a
//! single top threshold gate reading the bottom outputs plus any number of
//! direct wires. Weights are integers so strict comparisons stay exact.

use std::fmt;

use crate::error::{invalid, Error, Result};

/// Bound on `Σ|w| + |t|` for every gate of a circuit. Anything folded out of a
/// circuit that respects it stays inside `i64`.
pub const MAGNITUDE_LIMIT: i128 = 1 << 62;

/// A threshold gate `Σ w_i x_i ≥ t` with nonzero integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdGate {
    inputs: Vec<(usize, i64)>,
    threshold: i64,
}

impl ThresholdGate {
    pub fn new(inputs: Vec<(usize, i64)>, threshold: i64) -> Result<Self> {
        if let Some(&(v, _)) = inputs.iter().find(|(_, w)| *w == 0) {
            return Err(invalid(format!("zero weight on input x{v}")));
        }
        let mut seen: Vec<usize> = inputs.iter().map(|&(v, _)| v).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate input variable in gate"));
        }
        Ok(Self { inputs, threshold })
    }

    pub fn inputs(&self) -> &[(usize, i64)] {
        &self.inputs
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn fan_in(&self) -> usize {
        self.inputs.len()
    }

    /// Weighted sum of the inputs under `values`.
    pub fn value(&self, values: &[u32]) -> i128 {
        self.inputs
            .iter()
            .map(|&(v, w)| w as i128 * values[v] as i128)
            .sum()
    }

    pub fn fires(&self, values: &[u32]) -> bool {
        self.value(values) >= self.threshold as i128
    }

    fn magnitude(&self) -> i128 {
        self.inputs.iter().map(|&(_, w)| (w as i128).abs()).sum::<i128>()
            + (self.threshold as i128).abs()
    }
}

/// A depth-two threshold circuit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdCircuit {
    n_vars: usize,
    bottom: Vec<ThresholdGate>,
    top_gate_weights: Vec<i64>,
    direct_wires: Vec<(usize, i64)>,
    top_threshold: i64,
}

impl ThresholdCircuit {
    pub fn new(
        n_vars: usize,
        bottom: Vec<ThresholdGate>,
        top_gate_weights: Vec<i64>,
        direct_wires: Vec<(usize, i64)>,
        top_threshold: i64,
    ) -> Result<Self> {
        if top_gate_weights.len() != bottom.len() {
            return Err(Error::DimensionMismatch {
                expected: bottom.len(),
                found: top_gate_weights.len(),
            });
        }
        for (j, g) in bottom.iter().enumerate() {
            if let Some(&(v, _)) = g.inputs.iter().find(|&&(v, _)| v >= n_vars) {
                return Err(invalid(format!("gate {j} reads x{v} but n = {n_vars}")));
            }
            if g.magnitude() >= MAGNITUDE_LIMIT {
                return Err(invalid(format!("gate {j} exceeds the magnitude bound")));
            }
        }
        let mut seen = vec![false; n_vars];
        for &(v, w) in &direct_wires {
            if v >= n_vars {
                return Err(invalid(format!("direct wire x{v} but n = {n_vars}")));
            }
            if w == 0 {
                return Err(invalid(format!("zero weight on direct wire x{v}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(invalid(format!("duplicate direct wire x{v}")));
            }
        }
        let top_mag: i128 = top_gate_weights
            .iter()
            .chain(direct_wires.iter().map(|(_, w)| w))
            .map(|&w| (w as i128).abs())
            .sum::<i128>()
            + (top_threshold as i128).abs();
        if top_mag >= MAGNITUDE_LIMIT {
            return Err(invalid("top gate exceeds the magnitude bound"));
        }
        Ok(Self {
            n_vars,
            bottom,
            top_gate_weights,
            direct_wires,
            top_threshold,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn bottom(&self) -> &[ThresholdGate] {
        &self.bottom
    }

    pub fn top_gate_weights(&self) -> &[i64] {
        &self.top_gate_weights
    }

    pub fn direct_wires(&self) -> &[(usize, i64)] {
        &self.direct_wires
    }

    pub fn top_threshold(&self) -> i64 {
        self.top_threshold
    }

    /// Number of wires: the sum of bottom fan-ins. Direct wires do not count.
    pub fn wire_count(&self) -> usize {
        self.bottom.iter().map(ThresholdGate::fan_in).sum()
    }
}

/// Fan-in multiset (sorted ascending) and total wire count of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireStats {
    pub fanins: Vec<usize>,
    pub total: usize,
}

pub fn wire_stats(circuit: &ThresholdCircuit) -> WireStats {
    let mut fanins: Vec<usize> = circuit.bottom.iter().map(ThresholdGate::fan_in).collect();
    fanins.sort_unstable();
    let total = fanins.iter().sum();
    WireStats { fanins, total }
}

/// Values for every variable, each in `[0, arity)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<u32>,
    arity: u32,
}

impl Assignment {
    pub fn new(values: Vec<u32>, arity: u32) -> Result<Self> {
        if arity < 2 {
            return Err(invalid(format!("arity {arity} < 2")));
        }
        if let Some(v) = values.iter().find(|&&v| v >= arity) {
            return Err(invalid(format!("value {v} outside arity {arity}")));
        }
        Ok(Self { values, arity })
    }

    pub fn boolean(bits: &[bool]) -> Self {
        Self {
            values: bits.iter().map(|&b| b as u32).collect(),
            arity: 2,
        }
    }

    /// Boolean assignment with `x_i` = bit `i` of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self {
            values: (0..n).map(|i| ((mask >> i) & 1) as u32).collect(),
            arity: 2,
        }
    }

    pub fn zeros(n: usize, arity: u32) -> Self {
        Self {
            values: vec![0; n],
            arity,
        }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 10 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// A partial Boolean assignment: `Some(v)` for assigned variables, `None` for free ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    values: Vec<Option<u32>>,
}

impl Restriction {
    pub fn new(values: Vec<Option<u32>>) -> Self {
        Self { values }
    }

    pub fn all_free(n: usize) -> Self {
        Self {
            values: vec![None; n],
        }
    }

    /// Assigns the variables with `free[i] == false` from the bits of `bits`,
    /// taken in ascending variable order.
    pub fn from_free_mask(free: &[bool], bits: u64) -> Self {
        let mut k = 0;
        let values = free
            .iter()
            .map(|&is_free| {
                if is_free {
                    None
                } else {
                    let v = ((bits >> k) & 1) as u32;
                    k += 1;
                    Some(v)
                }
            })
            .collect();
        Self { values }
    }

    pub fn n_vars(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, var: usize) -> Option<u32> {
        self.values[var]
    }

    pub fn is_free(&self, var: usize) -> bool {
        self.values[var].is_none()
    }

    /// Free variables in ascending order; position `k` is the index of the
    /// variable in any circuit produced by [`simplify`].
    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_none()).collect()
    }

    pub fn assigned_vars(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_some()).collect()
    }

    /// Merges the restriction with an assignment to its free variables.
    pub fn combine(&self, free_values: &Assignment) -> Result<Assignment> {
        let free = self.free_vars();
        if free.len() != free_values.len() {
            return Err(Error::DimensionMismatch {
                expected: free.len(),
                found: free_values.len(),
            });
        }
        let mut out: Vec<u32> = self.values.iter().map(|v| v.unwrap_or(0)).collect();
        for (k, &var) in free.iter().enumerate() {
            out[var] = free_values.values[k];
        }
        Assignment::new(out, free_values.arity)
    }
}

/// Evaluates a Boolean circuit on a full assignment.
pub fn evaluate(circuit: &ThresholdCircuit, a: &Assignment) -> Result<bool> {
    if a.len() != circuit.n_vars {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_vars,
            found: a.len(),
        });
    }
    if a.arity != 2 {
        return Err(invalid("circuit evaluation needs a Boolean assignment"));
    }
    Ok(evaluate_unchecked(circuit, &a.values))
}

/// Evaluation without the dimension checks; `values` must have length `n` and be Boolean.
pub(crate) fn evaluate_unchecked(circuit: &ThresholdCircuit, values: &[u32]) -> bool {
    let mut top: i128 = circuit
        .direct_wires
        .iter()
        .map(|&(v, w)| w as i128 * values[v] as i128)
        .sum();
    for (g, &tw) in circuit.bottom.iter().zip(&circuit.top_gate_weights) {
        if g.fires(values) {
            top += tw as i128;
        }
    }
    top >= circuit.top_threshold as i128
}

fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("folding a restriction"))
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("folding a restriction"))
}

/// Applies a restriction and returns the residual circuit over the free
/// variables, re-indexed in ascending original order.
///
/// Gates left with no free input become constants absorbed by the top
/// threshold; gates left with one free input become a direct wire (`x`), a
/// negated wire folded as `w·(1 − x)`, or a constant. Everything else is kept
/// with its assigned inputs folded into the threshold.
pub fn simplify(circuit: &ThresholdCircuit, r: &Restriction) -> Result<ThresholdCircuit> {
    if r.n_vars() != circuit.n_vars {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_vars,
            found: r.n_vars(),
        });
    }
    let mut new_index = vec![usize::MAX; circuit.n_vars];
    let mut n_free = 0;
    for (v, slot) in new_index.iter_mut().enumerate() {
        if r.is_free(v) {
            *slot = n_free;
            n_free += 1;
        }
    }

    let mut top_threshold = circuit.top_threshold;
    let mut direct = vec![0i64; n_free];
    for &(v, w) in &circuit.direct_wires {
        match r.value(v) {
            Some(x) => top_threshold = sub(top_threshold, w * x as i64)?,
            None => direct[new_index[v]] = add(direct[new_index[v]], w)?,
        }
    }

    let mut bottom = Vec::new();
    let mut top_gate_weights = Vec::new();
    for (g, &tw) in circuit.bottom.iter().zip(&circuit.top_gate_weights) {
        let mut rest = g.threshold;
        let mut free_inputs = Vec::new();
        for &(v, w) in &g.inputs {
            match r.value(v) {
                Some(x) => rest = sub(rest, w * x as i64)?,
                None => free_inputs.push((new_index[v], w)),
            }
        }
        match free_inputs[..] {
            [] => {
                if rest <= 0 {
                    top_threshold = sub(top_threshold, tw)?;
                }
            }
            [(x, w)] => match (rest <= 0, w >= rest) {
                (true, true) => top_threshold = sub(top_threshold, tw)?,
                (false, false) => {}
                (false, true) => direct[x] = add(direct[x], tw)?,
                (true, false) => {
                    top_threshold = sub(top_threshold, tw)?;
                    direct[x] = sub(direct[x], tw)?;
                }
            },
            _ => {
                bottom.push(ThresholdGate {
                    inputs: free_inputs,
                    threshold: rest,
                });
                top_gate_weights.push(tw);
            }
        }
    }

    let direct_wires = direct
        .into_iter()
        .enumerate()
        .filter(|&(_, w)| w != 0)
        .collect();
    Ok(ThresholdCircuit {
        n_vars: n_free,
        bottom,
        top_gate_weights,
        direct_wires,
        top_threshold,
    })
}
