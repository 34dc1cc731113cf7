use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::model::{Assignment, MAGNITUDE_LIMIT};

/// Maps a gate value to the gate output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// `value ≥ t`
    Ge(i64),
    /// `value = v`
    Eq(i64),
    /// `value ≡ residue (mod modulus)`, with `modulus ≥ 1`; parity is `Mod { 2, 1 }`.
    Mod { modulus: i64, residue: i64 },
    /// Explicit table of accepting values.
    Set(BTreeSet<i64>),
}

impl Predicate {
    pub fn holds(&self, value: i128) -> bool {
        match self {
            Predicate::Ge(t) => value >= *t as i128,
            Predicate::Eq(v) => value == *v as i128,
            Predicate::Mod { modulus, residue } => {
                value.rem_euclid(*modulus as i128) == (*residue as i128).rem_euclid(*modulus as i128)
            }
            Predicate::Set(s) => i64::try_from(value).is_ok_and(|v| s.contains(&v)),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Predicate::Mod { modulus, .. } if *modulus < 1 => {
                Err(invalid(format!("modulus {modulus} < 1")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Ge(t) => write!(f, "ge {t}"),
            Predicate::Eq(v) => write!(f, "eq {v}"),
            Predicate::Mod { modulus, residue } => write!(f, "mod {modulus} {residue}"),
            Predicate::Set(s) if s.is_empty() => f.write_str("set"),
            Predicate::Set(s) => {
                let parts: Vec<String> = s.iter().map(i64::to_string).collect();
                write!(f, "set {}", parts.join(","))
            }
        }
    }
}

/// A gate whose output is a predicate of its weighted input sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricGate {
    inputs: Vec<(usize, i64)>,
    predicate: Predicate,
}

impl SymmetricGate {
    pub fn new(inputs: Vec<(usize, i64)>, predicate: Predicate) -> Result<Self> {
        check_inputs(&inputs)?;
        predicate.validate()?;
        Ok(Self { inputs, predicate })
    }

    pub fn inputs(&self) -> &[(usize, i64)] {
        &self.inputs
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    /// `Σ|w|`.
    pub fn weighted_fan_in(&self) -> u64 {
        self.inputs.iter().map(|&(_, w)| w.unsigned_abs()).sum()
    }

    pub fn value(&self, values: &[u32]) -> i128 {
        self.inputs
            .iter()
            .map(|&(v, w)| w as i128 * values[v] as i128)
            .sum()
    }

    pub fn output(&self, values: &[u32]) -> bool {
        self.predicate.holds(self.value(values))
    }
}

fn check_inputs(inputs: &[(usize, i64)]) -> Result<()> {
    if let Some(&(v, _)) = inputs.iter().find(|(_, w)| *w == 0) {
        return Err(invalid(format!("zero weight on input x{v}")));
    }
    let mut seen: Vec<usize> = inputs.iter().map(|&(v, _)| v).collect();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("duplicate input variable in gate"));
    }
    let mag: i128 = inputs.iter().map(|&(_, w)| (w as i128).abs()).sum();
    if mag >= MAGNITUDE_LIMIT {
        return Err(Error::Overflow("checking gate magnitude"));
    }
    Ok(())
}

/// A depth-two circuit of symmetric gates.
///
/// The top gate reads each bottom output `g_j` with weight
/// `top_gate_weights[j]` (zero meaning unconnected) plus the direct wires,
/// and applies `top`. `c` is the declared wire density: the weighted wire
/// count may not exceed `c·n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricCircuit {
    n_vars: usize,
    bottom: Vec<SymmetricGate>,
    top: Predicate,
    top_gate_weights: Vec<i64>,
    direct_wires: Vec<(usize, i64)>,
    c: u64,
}

impl SymmetricCircuit {
    pub fn new(
        n_vars: usize,
        bottom: Vec<SymmetricGate>,
        top: Predicate,
        top_gate_weights: Vec<i64>,
        direct_wires: Vec<(usize, i64)>,
        c: u64,
    ) -> Result<Self> {
        if top_gate_weights.len() != bottom.len() {
            return Err(Error::DimensionMismatch {
                expected: bottom.len(),
                found: top_gate_weights.len(),
            });
        }
        if c == 0 {
            return Err(invalid("declared wire density must be at least 1"));
        }
        for g in &bottom {
            if let Some(&(v, _)) = g.inputs.iter().find(|&&(v, _)| v >= n_vars) {
                return Err(invalid(format!("variable x{v} out of range for n = {n_vars}")));
            }
        }
        if let Some(&(v, _)) = direct_wires.iter().find(|&&(v, _)| v >= n_vars) {
            return Err(invalid(format!("variable x{v} out of range for n = {n_vars}")));
        }
        check_inputs(&direct_wires)?;
        top.validate()?;
        let top_mag: i128 = top_gate_weights
            .iter()
            .chain(direct_wires.iter().map(|(_, w)| w))
            .map(|&w| (w as i128).abs())
            .sum();
        if top_mag >= MAGNITUDE_LIMIT {
            return Err(Error::Overflow("checking top gate magnitude"));
        }
        let circuit = Self {
            n_vars,
            bottom,
            top,
            top_gate_weights,
            direct_wires,
            c,
        };
        let budget = c as u128 * n_vars as u128;
        if circuit.weighted_wires() as u128 > budget {
            return Err(invalid(format!(
                "{} weighted wires exceed the declared budget {c}·{n_vars}",
                circuit.weighted_wires()
            )));
        }
        Ok(circuit)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn bottom(&self) -> &[SymmetricGate] {
        &self.bottom
    }

    pub fn top(&self) -> &Predicate {
        &self.top
    }

    pub fn top_gate_weights(&self) -> &[i64] {
        &self.top_gate_weights
    }

    pub fn direct_wires(&self) -> &[(usize, i64)] {
        &self.direct_wires
    }

    pub fn declared_c(&self) -> u64 {
        self.c
    }

    /// Sum of the bottom weighted fan-ins.
    pub fn weighted_wires(&self) -> u64 {
        self.bottom.iter().map(SymmetricGate::weighted_fan_in).sum()
    }
}

/// Evaluates a symmetric circuit on a Boolean assignment.
pub fn evaluate_symmetric(circuit: &SymmetricCircuit, a: &Assignment) -> Result<bool> {
    if a.len() != circuit.n_vars {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_vars,
            found: a.len(),
        });
    }
    if a.arity() != 2 {
        return Err(invalid("circuit evaluation needs a Boolean assignment"));
    }
    Ok(evaluate_symmetric_unchecked(circuit, a.values()))
}

pub(crate) fn evaluate_symmetric_unchecked(circuit: &SymmetricCircuit, values: &[u32]) -> bool {
    let mut top: i128 = circuit
        .direct_wires
        .iter()
        .map(|&(v, w)| w as i128 * values[v] as i128)
        .sum();
    for (g, &tw) in circuit.bottom.iter().zip(&circuit.top_gate_weights) {
        if tw != 0 && g.output(values) {
            top += tw as i128;
        }
    }
    circuit.top.holds(top)
}
