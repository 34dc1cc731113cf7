//! Fixed instances for the criterion benches.

use domsat::oracle::generate;
use domsat::{
    DominationInstance, FaninDist, GenKind, GenSpec, IneqSystem, Instance, SymmetricCircuit, ThresholdCircuit,
};

fn spec(kind: GenKind, n: usize, seed: u64) -> GenSpec {
    let mut s = GenSpec::new(kind, n);
    s.seed = seed;
    s
}

/// Random vector pair sets of size `n` in dimension `d`.
pub fn vectors(n: usize, d: usize, seed: u64) -> DominationInstance {
    let mut s = spec(GenKind::Vectors, n, seed);
    s.rows = d;
    match generate(&s).expect("vector generator") {
        Instance::Vectors(v) => v,
        _ => unreachable!(),
    }
}

pub fn ilp(n: usize, rows: usize, arity: u32, seed: u64) -> IneqSystem {
    let mut s = spec(GenKind::Ilp, n, seed);
    s.rows = rows;
    s.arity = arity;
    match generate(&s).expect("ILP generator") {
        Instance::Ilp(sys) => sys,
        _ => unreachable!(),
    }
}

/// A c = 1 circuit with fan-in 3 gates.
pub fn circuit(n: usize, seed: u64) -> ThresholdCircuit {
    let mut s = spec(GenKind::ThresholdCircuit, n, seed);
    s.distribution = FaninDist::Fixed(3);
    match generate(&s).expect("circuit generator") {
        Instance::Threshold(c) => c,
        _ => unreachable!(),
    }
}

pub fn symmetric(n: usize, c: u64, seed: u64) -> SymmetricCircuit {
    let mut s = spec(GenKind::SymmetricCircuit, n, seed);
    s.c = c;
    s.weight_bound = 3;
    match generate(&s).expect("symmetric generator") {
        Instance::Symmetric(c) => c,
        _ => unreachable!(),
    }
}
