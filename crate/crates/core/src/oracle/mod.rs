//! Definitional reference solvers and seeded instance generators.
//!
//! The brute-force solvers enumerate candidates in lexicographic order
//! (`x_0` most significant) and check them with the model evaluators only,
//! so their answers are canonical and independent of the fast paths.

mod generate;

pub use generate::{fanin_plan, generate, FaninDist, GenKind, GenSpec, Instance};

use crate::error::{Error, Result};
use crate::model::{evaluate, Assignment, ThresholdCircuit};
use crate::splitlist::{verify, IneqSystem};
use crate::symsat::{evaluate_symmetric, EqSystem, SymmetricCircuit};
use crate::vecdom::DominationInstance;

/// Largest Boolean instance the oracles will enumerate.
pub const MAX_BRUTE_VARS: usize = 26;

fn check_size(n: usize, arity: u32) -> Result<()> {
    let bits = (arity as f64).log2() * n as f64;
    if bits > MAX_BRUTE_VARS as f64 + 1e-9 {
        return Err(Error::Guard(format!(
            "brute force over {arity}^{n} assignments"
        )));
    }
    Ok(())
}

/// Calls `accept` on every assignment in lexicographic order and returns the first accepted one.
fn first_lexicographic(
    n: usize,
    arity: u32,
    mut accept: impl FnMut(&Assignment) -> Result<bool>,
) -> Result<Option<Assignment>> {
    check_size(n, arity)?;
    let mut values = vec![0u32; n];
    loop {
        let a = Assignment::new(values.clone(), arity)?;
        if accept(&a)? {
            return Ok(Some(a));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            values[i] += 1;
            if values[i] < arity {
                break;
            }
            values[i] = 0;
        }
    }
}

/// Lexicographically smallest satisfying assignment of a threshold circuit.
pub fn brute_circuit_sat(circuit: &ThresholdCircuit) -> Result<Option<Assignment>> {
    first_lexicographic(circuit.n_vars(), 2, |a| evaluate(circuit, a))
}

/// Lexicographically smallest feasible point of an inequality system.
pub fn brute_ilp(sys: &IneqSystem) -> Result<Option<Assignment>> {
    first_lexicographic(sys.n_vars(), sys.arity(), |a| Ok(verify(sys, a)))
}

pub fn brute_symmetric(circuit: &SymmetricCircuit) -> Result<Option<Assignment>> {
    first_lexicographic(circuit.n_vars(), 2, |a| evaluate_symmetric(circuit, a))
}

pub fn brute_eq(sys: &EqSystem) -> Result<Option<Assignment>> {
    first_lexicographic(sys.n_vars(), 2, |a| Ok(sys.satisfies(a)))
}

/// First dominating pair `(tag_a, tag_b)` in the order `A × B`, by direct comparison.
pub fn brute_domination(inst: &DominationInstance) -> Option<(u64, u64)> {
    for u in &inst.a {
        for v in &inst.b {
            let ok = u
                .coords
                .iter()
                .zip(&v.coords)
                .zip(&inst.strict)
                .all(|((x, y), &s)| if s { x > y } else { x >= y });
            if ok {
                return Some((u.tag, v.tag));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ThresholdGate;
    use crate::splitlist::{Relation, Row};
    use crate::vecdom::TaggedVector;

    #[test]
    fn tautology_and_contradiction() {
        let g = ThresholdGate::new(vec![(0, 1)], 1).unwrap();
        let t = ThresholdCircuit::new(3, vec![g.clone()], vec![1], vec![], -1).unwrap();
        assert_eq!(brute_circuit_sat(&t).unwrap().unwrap().values(), &[0, 0, 0]);
        let h = ThresholdGate::new(vec![(0, -1)], 0).unwrap();
        let c = ThresholdCircuit::new(1, vec![g, h], vec![1, 1], vec![], 2).unwrap();
        assert_eq!(brute_circuit_sat(&c).unwrap(), None);
    }

    #[test]
    fn lexicographic_order() {
        // x0 + x1 + x2 ≥ 1: the smallest witness sets the last variable.
        let sys = IneqSystem::new(3, 2, vec![Row::new(vec![(0, 1), (1, 1), (2, 1)], Relation::Ge, 1)]).unwrap();
        assert_eq!(brute_ilp(&sys).unwrap().unwrap().values(), &[0, 0, 1]);
        let sys = IneqSystem::new(2, 3, vec![Row::new(vec![(0, 1), (1, 1)], Relation::Ge, 4)]).unwrap();
        assert_eq!(brute_ilp(&sys).unwrap().unwrap().values(), &[2, 2]);
    }

    #[test]
    fn domination_examples() {
        let tv = |c: Vec<i64>, t| TaggedVector::new(c, t);
        let inst = DominationInstance::non_strict(vec![tv(vec![2, 3], 1)], vec![tv(vec![1, 3], 2)], 2).unwrap();
        assert_eq!(brute_domination(&inst), Some((1, 2)));
        let inst = DominationInstance::non_strict(
            vec![tv(vec![0, 1], 1), tv(vec![1, 0], 2)],
            vec![tv(vec![1, 1], 3)],
            2,
        )
        .unwrap();
        assert_eq!(brute_domination(&inst), None);
        let inst = DominationInstance::new(vec![tv(vec![5], 1)], vec![tv(vec![5], 2)], vec![true]).unwrap();
        assert_eq!(brute_domination(&inst), None);
    }

    #[test]
    fn size_guard() {
        let c = ThresholdCircuit::new(30, vec![], vec![], vec![], 1).unwrap();
        assert!(matches!(brute_circuit_sat(&c), Err(Error::Guard(_))));
    }
}
