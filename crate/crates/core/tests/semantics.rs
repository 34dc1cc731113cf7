//! Circuit semantics checked against a separately written evaluator.

use domsat::model::{evaluate, simplify, Assignment, Restriction, ThresholdCircuit, ThresholdGate};
use domsat::oracle::{brute_circuit_sat, brute_symmetric, generate, FaninDist, GenKind, GenSpec, Instance};
use domsat::symsat::evaluate_symmetric;
use domsat::SymmetricCircuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference_eval(c: &ThresholdCircuit, x: &[u32]) -> bool {
    let mut top = 0i128;
    for (g, &tw) in c.bottom().iter().zip(c.top_gate_weights()) {
        let mut s = 0i128;
        for &(v, w) in g.inputs() {
            s += w as i128 * x[v] as i128;
        }
        if s >= g.threshold() as i128 {
            top += tw as i128;
        }
    }
    for &(v, w) in c.direct_wires() {
        top += w as i128 * x[v] as i128;
    }
    top >= c.top_threshold() as i128
}

fn reference_symmetric(c: &SymmetricCircuit, x: &[u32]) -> bool {
    let mut top = 0i128;
    for (g, &tw) in c.bottom().iter().zip(c.top_gate_weights()) {
        let s: i128 = g.inputs().iter().map(|&(v, w)| w as i128 * x[v] as i128).sum();
        if g.predicate().holds(s) {
            top += tw as i128;
        }
    }
    for &(v, w) in c.direct_wires() {
        top += w as i128 * x[v] as i128;
    }
    c.top().holds(top)
}

fn bits(n: usize, mask: u64) -> Vec<u32> {
    (0..n).map(|i| ((mask >> i) & 1) as u32).collect()
}

fn random_circuit(rng: &mut ChaCha8Rng, n: usize) -> ThresholdCircuit {
    let m = rng.gen_range(0..=5);
    let w = |rng: &mut ChaCha8Rng| {
        let v: i64 = rng.gen_range(1..=10);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    };
    let bottom = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=n);
            let vars = rand::seq::index::sample(rng, n, k).into_vec();
            let inputs = vars.into_iter().map(|v| (v, w(rng))).collect();
            ThresholdGate::new(inputs, rng.gen_range(-10..=10)).unwrap()
        })
        .collect();
    let tw = (0..m).map(|_| w(rng)).collect();
    let mut direct = Vec::new();
    for v in 0..n {
        if rng.gen_bool(0.3) {
            direct.push((v, w(rng)));
        }
    }
    ThresholdCircuit::new(n, bottom, tw, direct, rng.gen_range(-10..=10)).unwrap()
}

#[test]
fn evaluate_matches_reference_on_generated_circuits() {
    for seed in 0..40 {
        let mut spec = GenSpec::new(GenKind::ThresholdCircuit, 10);
        spec.seed = seed;
        spec.c = 1 + seed % 3;
        let Instance::Threshold(c) = generate(&spec).unwrap() else {
            unreachable!()
        };
        for mask in 0..1u64 << 10 {
            let x = bits(10, mask);
            let a = Assignment::from_mask(10, mask);
            assert_eq!(evaluate(&c, &a).unwrap(), reference_eval(&c, &x), "seed {seed} mask {mask}");
        }
    }
}

#[test]
fn evaluate_symmetric_matches_reference() {
    for seed in 0..40 {
        let mut spec = GenSpec::new(GenKind::SymmetricCircuit, 10);
        spec.seed = seed;
        spec.weight_bound = 3;
        let Instance::Symmetric(c) = generate(&spec).unwrap() else {
            unreachable!()
        };
        for mask in 0..1u64 << 10 {
            let a = Assignment::from_mask(10, mask);
            assert_eq!(evaluate_symmetric(&c, &a).unwrap(), reference_symmetric(&c, &bits(10, mask)));
        }
    }
}

#[test]
fn simplify_preserves_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let c = random_circuit(&mut rng, n);
        let free: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let assigned = free.iter().filter(|&&f| !f).count();
        let r = Restriction::from_free_mask(&free, rng.gen_range(0..1u64 << assigned));
        let residual = simplify(&c, &r).unwrap();
        let nf = residual.n_vars();
        assert_eq!(nf, n - assigned);
        for mask in 0..1u64 << nf {
            let af = Assignment::from_mask(nf, mask);
            let full = r.combine(&af).unwrap();
            assert_eq!(evaluate(&residual, &af).unwrap(), evaluate(&c, &full).unwrap());
        }
        // Residual gates keep at least two free inputs.
        assert!(residual.bottom().iter().all(|g| g.fan_in() >= 2));
    }
}

#[test]
fn oracle_returns_lexicographically_first_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(1..=10);
        let c = random_circuit(&mut rng, n);
        // Lexicographic order with x0 as the most significant position.
        let first = (0..1u64 << n)
            .map(|m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u32).collect::<Vec<_>>())
            .find(|x| reference_eval(&c, x));
        let got = brute_circuit_sat(&c).unwrap();
        assert_eq!(got.as_ref().map(|a| a.values().to_vec()), first);
    }
}

#[test]
fn symmetric_oracle_agrees_with_reference() {
    for seed in 0..30 {
        let mut spec = GenSpec::new(GenKind::SymmetricCircuit, 8);
        spec.seed = 100 + seed;
        spec.c = 2;
        spec.distribution = FaninDist::Uniform;
        let Instance::Symmetric(c) = generate(&spec).unwrap() else {
            unreachable!()
        };
        let any = (0..1u64 << 8).any(|m| reference_symmetric(&c, &bits(8, m)));
        assert_eq!(brute_symmetric(&c).unwrap().is_some(), any);
    }
}

#[test]
fn single_gate_example() {
    // x0 ≥ 1 feeding a top gate with threshold 1.
    let g = ThresholdGate::new(vec![(0, 1)], 1).unwrap();
    let c = ThresholdCircuit::new(1, vec![g], vec![1], vec![], 1).unwrap();
    assert!(!evaluate(&c, &Assignment::from_mask(1, 0)).unwrap());
    assert!(evaluate(&c, &Assignment::from_mask(1, 1)).unwrap());
    assert_eq!(brute_circuit_sat(&c).unwrap().unwrap().values(), &[1]);
}
