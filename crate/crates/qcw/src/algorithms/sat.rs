//! Circuit satisfiability through Grover: decode the circuit encoding,
//! compile it into a reversible oracle, and search for a satisfying input.
//! Every oracle query executes the compiled circuit, so the reported cost
//! factorizes as queries × per-query gate count plus auxiliary gates.

use rand_chacha::ChaCha8Rng;

use crate::algorithms::backend::LocalBackend;
use crate::algorithms::grover::grover_search_with_backend;
use crate::boolcircuit::{decode, CircuitEncoding};
use crate::error::{Error, Result};
use crate::oracle::compile_bool_circuit;

const MAX_SAT_BITS: usize = 12;

/// Cost-annotated result of the Grover-based satisfiability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatRun {
    pub satisfiable: bool,
    /// Verified satisfying assignment as a big-endian index.
    pub witness: Option<u64>,
    pub n: usize,
    pub queries: u64,
    /// Gates of the compiled oracle, paid once per query.
    pub per_query_gates: u64,
    pub aux_gates: u64,
    /// queries × per_query_gates + aux_gates.
    pub total_gates: u64,
}

/// Decodes e(C), compiles C into a reversible oracle, and runs Grover search
/// with the compiled circuit substituted for every query gate. A returned
/// witness is always classically verified, so a satisfiable verdict is never
/// wrong; an unsatisfiable verdict errs with probability at most ε.
pub fn quantum_sat(
    encoding: &CircuitEncoding,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<SatRun> {
    let circuit = decode(encoding)?;
    if circuit.has_coin() {
        return Err(Error::InvalidInput(
            "satisfiability is defined for deterministic circuits".into(),
        ));
    }
    let n = circuit.num_inputs();
    if n == 0 || n > MAX_SAT_BITS {
        return Err(Error::ResourceLimit(format!(
            "quantum SAT handles 1..={MAX_SAT_BITS} inputs, got {n}"
        )));
    }
    let compiled = compile_bool_circuit(&circuit, &[circuit.output()])?;
    let mut backend = LocalBackend::from_compiled(&compiled)?;
    let per_query_gates = backend.per_query_gates();
    let run = grover_search_with_backend(&mut backend, None, eps, rng)?;
    Ok(SatRun {
        satisfiable: run.success,
        witness: run.outcome,
        n,
        queries: run.queries,
        per_query_gates,
        aux_gates: run.aux_gates,
        total_gates: run.queries * per_query_gates + run.aux_gates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::grover::query_budget;
    use crate::boolcircuit::{brute_force_sat, encode, parity_five_gate, random_circuit, BoolCircuit, NodeKind};
    use rand::{Rng, SeedableRng};

    #[test]
    fn fig1_circuit_is_satisfiable_with_unequal_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = encode(&parity_five_gate()).unwrap();
        let run = quantum_sat(&e, 0.05, &mut rng).unwrap();
        assert!(run.satisfiable);
        let w = run.witness.unwrap();
        assert_ne!(w >> 1, w & 1, "witness must have x0 != x1");
        assert_eq!(run.total_gates, run.queries * run.per_query_gates + run.aux_gates);
    }

    #[test]
    fn constant_zero_circuit_reports_unsatisfiable() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = BoolCircuit::new(
            2,
            vec![
                NodeKind::Input(0),
                NodeKind::Input(1),
                NodeKind::Not(0),
                NodeKind::And(0, 2),
            ],
            3,
        )
        .unwrap();
        let run = quantum_sat(&encode(&c).unwrap(), 0.05, &mut rng).unwrap();
        assert!(!run.satisfiable);
        assert_eq!(run.witness, None);
    }

    #[test]
    fn random_circuits_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let budget = query_budget(8, 0.05);
        let mut agreements = 0;
        for _ in 0..30 {
            let c = random_circuit(8, rng.gen_range(5..=20), &mut rng);
            let truth = brute_force_sat(&c).unwrap();
            let run = quantum_sat(&encode(&c).unwrap(), 0.05, &mut rng).unwrap();
            if run.satisfiable == truth.satisfiable {
                agreements += 1;
            }
            if let Some(w) = run.witness {
                assert!(c.evaluate_index(w).unwrap(), "unverified witness");
            }
            assert!(run.queries <= budget);
        }
        assert!(agreements >= 29, "only {agreements}/30 agreed");
    }
}
