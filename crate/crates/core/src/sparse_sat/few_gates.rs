use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::model::{evaluate, Assignment, ThresholdCircuit};
use crate::splitlist::{solve_ilp, IneqSystem, Relation, Row};

/// Largest bottom layer the gate-subset enumeration accepts.
pub const MAX_FEW_GATES: usize = 60;

/// A guess of which bottom gates fire: bit `j` set means gate `j` is satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GateSubsetGuess {
    pub satisfied: u64,
    pub m: usize,
}

impl GateSubsetGuess {
    pub fn is_satisfied(&self, gate: usize) -> bool {
        (self.satisfied >> gate) & 1 == 1
    }
}

/// The inequality system for one guess: satisfied gates keep `Σ w x ≥ t`,
/// the others get `Σ w x < t`, and the top gate becomes
/// `Σ v x ≥ T − w_U` where `w_U` sums the top weights of the guessed gates.
pub fn guess_system(circuit: &ThresholdCircuit, guess: GateSubsetGuess) -> Result<IneqSystem> {
    let m = circuit.bottom().len();
    if guess.m != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: guess.m,
        });
    }
    let mut rows = Vec::with_capacity(m + 1);
    let mut w_u: i64 = 0;
    for (j, (g, &tw)) in circuit
        .bottom()
        .iter()
        .zip(circuit.top_gate_weights())
        .enumerate()
    {
        let rel = if guess.is_satisfied(j) {
            w_u = w_u
                .checked_add(tw)
                .ok_or(Error::Overflow("summing guessed top weights"))?;
            Relation::Ge
        } else {
            Relation::Lt
        };
        rows.push(Row::new(g.inputs().to_vec(), rel, g.threshold()));
    }
    let top_rhs = circuit
        .top_threshold()
        .checked_sub(w_u)
        .ok_or(Error::Overflow("adjusting the top threshold"))?;
    rows.push(Row::new(circuit.direct_wires().to_vec(), Relation::Ge, top_rhs));
    IneqSystem::new(circuit.n_vars(), 2, rows)
}

/// Satisfiability of a circuit with few bottom gates: one split-and-list
/// feasibility problem per gate-subset guess.
pub fn sat_few_gates(circuit: &ThresholdCircuit) -> Result<(Option<Assignment>, WorkCounters)> {
    let m = circuit.bottom().len();
    if m > MAX_FEW_GATES {
        return Err(Error::Guard(format!(
            "{m} bottom gates exceed the few-gates limit of {MAX_FEW_GATES}"
        )));
    }
    let mut counters = WorkCounters::default();
    for satisfied in 0..(1u64 << m) {
        counters.guesses += 1;
        let sys = guess_system(circuit, GateSubsetGuess { satisfied, m })?;
        let (witness, c) = solve_ilp(&sys)?;
        counters += c;
        if let Some(a) = witness {
            assert!(
                evaluate(circuit, &a)?,
                "few-gates witness does not satisfy the circuit"
            );
            return Ok((Some(a), counters));
        }
    }
    Ok((None, counters))
}
