//! Property tests over randomized structures: instead of enumerating cases
//! by hand, let proptest shrink any counterexample it finds.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcw::boolcircuit::{decode, encode, random_circuit};
use qcw::comm::{eq_fingerprint, trivial_protocol};
use qcw::gates::{hadamard_matrix, rewrite_to_basis, Gate, GateKind, QuantumCircuit};
use qcw::oracle::{OracleFunction, QueryCounter, ReversibleQuery};
use qcw::statevector::{circuit_unitary, StateVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_decode_agrees_on_every_input(seed in 0u64..1_000, n in 2usize..=6, gates in 1usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circuit = random_circuit(n, gates, &mut rng);
        let decoded = decode(&encode(&circuit).unwrap()).unwrap();
        prop_assert_eq!(decoded.num_inputs(), n);
        for assign in 0..(1u64 << n) {
            prop_assert_eq!(
                circuit.evaluate_index(assign).unwrap(),
                decoded.evaluate_index(assign).unwrap()
            );
        }
    }

    #[test]
    fn reversible_queries_are_involutions(seed in 0u64..1_000, m in 1usize..=5, k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<u64> = (0..1u64 << m)
            .map(|_| rand::Rng::gen_range(&mut rng, 0..1u64 << k))
            .collect();
        let query = ReversibleQuery::new(OracleFunction::from_table(m, k, table).unwrap());
        let mut counter = QueryCounter::new();
        for z in 0..1u64 << (m + k) {
            let (x, y) = (z >> k, z & ((1 << k) - 1));
            let (x1, y1) = query.classical(x, y, &mut counter).unwrap();
            let (x2, y2) = query.classical(x1, y1, &mut counter).unwrap();
            prop_assert_eq!((x2, y2), (x, y));
        }
        prop_assert_eq!(counter.count(), 2u64 << (m + k));
    }

    #[test]
    fn tensor_products_stay_normalized(seed in 0u64..1_000, m in 1usize..=4, n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(m, &mut rng);
        let b = random_state(n, &mut rng);
        let t = a.tensor(&b).unwrap();
        prop_assert!((t.norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn circuits_preserve_norm_and_rewrites_preserve_unitaries(
        seed in 0u64..500,
        gates in 1usize..=10,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circuit = random_rewritable_circuit(3, gates, &mut rng);
        let mut state = random_state(3, &mut rng);
        state.apply_circuit(&circuit).unwrap();
        prop_assert!((state.norm() - 1.0).abs() <= 1e-9);

        let rewritten = rewrite_to_basis(&circuit).unwrap();
        let a = circuit_unitary(&circuit).unwrap();
        let b = circuit_unitary(&rewritten).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-8);
    }

    #[test]
    fn fingerprinting_never_rejects_equal_strings(
        seed in 0u64..1_000,
        n in 2usize..=128,
        rounds in 1u32..=12,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<bool> = (0..n).map(|_| rand::Rng::gen(&mut rng)).collect();
        let (accepted, transcript) = eq_fingerprint(&x, &x, rounds, &mut rng).unwrap();
        prop_assert!(accepted);
        prop_assert!(transcript.totals_consistent());
        // And the trivial protocol agrees on equality.
        let (trivial, t) = trivial_protocol(&x, &x, |a, b| a == b).unwrap();
        prop_assert!(trivial);
        prop_assert_eq!(t.bits_total, n as u64);
    }

    #[test]
    fn hadamard_is_self_inverse_on_random_states(seed in 0u64..1_000, q in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = random_state(4, &mut rng);
        let before = state.amplitudes().to_vec();
        let h = hadamard_matrix();
        state.apply_one_qubit(&h, q).unwrap();
        state.apply_one_qubit(&h, q).unwrap();
        for (a, b) in state.amplitudes().iter().zip(before.iter()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}

fn random_state(m: usize, rng: &mut ChaCha8Rng) -> StateVector {
    use rand::Rng;
    let len = 1usize << m;
    let mut amps: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-9 {
        amps[0] = Complex64::ONE;
        return StateVector::from_amplitudes(amps).unwrap();
    }
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

fn random_rewritable_circuit(m: usize, gates: usize, rng: &mut ChaCha8Rng) -> QuantumCircuit {
    use rand::Rng;
    let mut circuit = QuantumCircuit::new(m);
    for _ in 0..gates {
        let q = rng.gen_range(0..m);
        let gate = match rng.gen_range(0..8) {
            0 => Gate::new(GateKind::H, vec![q]),
            1 => Gate::new(GateKind::V, vec![q]),
            2 => Gate::new(GateKind::Vdg, vec![q]),
            3 => Gate::new(GateKind::W, vec![q]),
            4 => Gate::new(GateKind::Wdg, vec![q]),
            5 => Gate::new(GateKind::X, vec![q]),
            6 => {
                let mut t = rng.gen_range(0..m);
                while t == q {
                    t = rng.gen_range(0..m);
                }
                Gate::new(GateKind::Cnot, vec![q, t])
            }
            _ => {
                let mut t = rng.gen_range(0..m);
                while t == q {
                    t = rng.gen_range(0..m);
                }
                Gate::new(GateKind::ControlledV, vec![q, t])
            }
        };
        circuit.push(gate.unwrap()).unwrap();
    }
    circuit
}
