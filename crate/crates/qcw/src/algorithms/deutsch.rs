//! Deutsch's problem: determine c1 of f(t) = (c0 + c1·t) mod 2.
//!
//! The quantum circuit needs one query and is exact; the classical circuit
//! needs two queries, and an exhaustive enumeration shows no deterministic
//! one-query strategy exists.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::hadamard_matrix;
use crate::oracle::{OracleFunction, QueryCounter, RegisterMap, ReversibleQuery};
use crate::statevector::StateVector;

/// An instance f(t) = (c0 + c1·t) mod 2 of Deutsch's problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeutschInstance {
    pub c0: bool,
    pub c1: bool,
}

impl DeutschInstance {
    pub fn all() -> [DeutschInstance; 4] {
        [
            DeutschInstance { c0: false, c1: false },
            DeutschInstance { c0: false, c1: true },
            DeutschInstance { c0: true, c1: false },
            DeutschInstance { c0: true, c1: true },
        ]
    }

    pub fn f(&self, t: bool) -> bool {
        self.c0 ^ (self.c1 & t)
    }

    pub fn oracle(&self) -> OracleFunction {
        OracleFunction::from_table(
            1,
            1,
            vec![u64::from(self.f(false)), u64::from(self.f(true))],
        )
        .expect("two-entry table")
    }
}

/// What the one-query quantum circuit produced.
#[derive(Debug, Clone)]
pub struct DeutschOutcome {
    /// The measured first qubit; equals c1 with probability 1.
    pub answer: bool,
    /// Analytic probability of that answer before measurement.
    pub answer_probability: f64,
    /// Amplitude of the final basis state |answer⟩|1⟩; equals (-1)^c0.
    pub phase: Complex64,
    pub queries: u64,
    pub aux_gates: u64,
}

/// The one-query quantum circuit: prepare |0⟩|1⟩, H⊗H, one f-query, H⊗H,
/// measure qubit 0. The final state is (-1)^c0 |c1⟩|1⟩.
pub fn deutsch(
    oracle: &OracleFunction,
    counter: &mut QueryCounter,
    rng: &mut ChaCha8Rng,
) -> Result<DeutschOutcome> {
    if oracle.in_bits() != 1 || oracle.out_bits() != 1 {
        return Err(Error::InvalidInput(
            "deutsch expects a 1-bit to 1-bit oracle".into(),
        ));
    }
    let query = ReversibleQuery::new(oracle.clone());
    let h = hadamard_matrix();
    let mut state = StateVector::basis_state(2, "01")?;
    state.apply_one_qubit(&h, 0)?;
    state.apply_one_qubit(&h, 1)?;
    query.quantum(&mut state, &RegisterMap::contiguous(1, 1), counter)?;
    state.apply_one_qubit(&h, 0)?;
    state.apply_one_qubit(&h, 1)?;

    let p_one = state.probability_of(|b| b.bit(0));
    let (idx, _) = state.sample_index(rng);
    let answer = idx >> 1 == 1;
    let answer_probability = if answer { p_one } else { 1.0 - p_one };
    let phase = state.amplitude((idx & !1) | 1);
    Ok(DeutschOutcome {
        answer,
        answer_probability,
        phase,
        queries: 1,
        aux_gates: 4,
    })
}

/// The two-query classical circuit: both bits start at 0, an f-query, a NOT
/// on the query wire, and a second f-query leave the bits at (1, c1).
pub fn classical_deutsch_two_query(
    oracle: &OracleFunction,
    counter: &mut QueryCounter,
) -> Result<bool> {
    if oracle.in_bits() != 1 || oracle.out_bits() != 1 {
        return Err(Error::InvalidInput(
            "deutsch expects a 1-bit to 1-bit oracle".into(),
        ));
    }
    let query = ReversibleQuery::new(oracle.clone());
    let (x, y) = (0u64, 0u64);
    let (x, y) = query.classical(x, y, counter)?;
    let x = x ^ 1;
    let (x, y) = query.classical(x, y, counter)?;
    debug_assert_eq!(x, 1);
    Ok(y == 1)
}

/// One enumerated single-query strategy and the instance that refutes it.
#[derive(Debug, Clone)]
pub struct StrategyRefutation {
    /// The fixed query point t.
    pub query_point: bool,
    /// Post-processing applied to the observation f(t).
    pub postprocess: &'static str,
    /// An instance (c0, c1) on which the strategy answers incorrectly.
    pub falsifying_instance: (bool, bool),
}

/// Two instances a fixed query point cannot tell apart: identical
/// observation, different answers.
#[derive(Debug, Clone, Copy)]
pub struct CollisionPair {
    pub query_point: bool,
    pub instances: [(bool, bool); 2],
}

/// Proof by enumeration that no deterministic classical strategy computes c1
/// with a single query.
#[derive(Debug, Clone)]
pub struct ImpossibilityReport {
    /// All 8 strategies (query point × post-processing), each refuted.
    pub strategies: Vec<StrategyRefutation>,
    /// Indistinguishable instance pairs for both query points.
    pub collisions: [CollisionPair; 2],
}

/// Enumerates every deterministic one-query strategy: a query point
/// t ∈ {0,1} and a post-processing map applied to the observation f(t).
/// Each strategy answers some instance incorrectly, because f(t) alone fixes
/// c0 or c0⊕c1 and never c1.
pub fn classical_deutsch_impossibility() -> ImpossibilityReport {
    let postprocessors: [(&'static str, fn(bool) -> bool); 4] = [
        ("const-0", |_| false),
        ("const-1", |_| true),
        ("identity", |o| o),
        ("negate", |o| !o),
    ];
    let mut strategies = Vec::with_capacity(8);
    for t in [false, true] {
        for (name, g) in postprocessors {
            let falsifier = DeutschInstance::all()
                .into_iter()
                .find(|inst| g(inst.f(t)) != inst.c1)
                .expect("every fixed-query strategy fails some instance");
            strategies.push(StrategyRefutation {
                query_point: t,
                postprocess: name,
                falsifying_instance: (falsifier.c0, falsifier.c1),
            });
        }
    }
    let collision_for = |t: bool| {
        let insts = DeutschInstance::all();
        for i in 0..4 {
            for j in i + 1..4 {
                if insts[i].f(t) == insts[j].f(t) && insts[i].c1 != insts[j].c1 {
                    return CollisionPair {
                        query_point: t,
                        instances: [(insts[i].c0, insts[i].c1), (insts[j].c0, insts[j].c1)],
                    };
                }
            }
        }
        unreachable!("a collision always exists for a 1-bit observation of 4 instances")
    };
    ImpossibilityReport {
        strategies,
        collisions: [collision_for(false), collision_for(true)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn quantum_circuit_is_exact_on_all_instances() {
        for inst in DeutschInstance::all() {
            let mut counter = QueryCounter::new();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let out = deutsch(&inst.oracle(), &mut counter, &mut rng).unwrap();
            assert_eq!(out.answer, inst.c1, "instance {inst:?}");
            assert!((out.answer_probability - 1.0).abs() <= 1e-9);
            assert_eq!(counter.count(), 1);
            let expected_phase = if inst.c0 { -1.0 } else { 1.0 };
            assert!((out.phase - Complex64::new(expected_phase, 0.0)).norm() <= 1e-9);
        }
    }

    #[test]
    fn phase_example_c0_one_c1_zero() {
        // (c0, c1) = (1, 0): final state -|0⟩|1⟩.
        let inst = DeutschInstance { c0: true, c1: false };
        let mut counter = QueryCounter::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = deutsch(&inst.oracle(), &mut counter, &mut rng).unwrap();
        assert!(!out.answer);
        assert!((out.phase - Complex64::new(-1.0, 0.0)).norm() <= 1e-9);
    }

    #[test]
    fn two_query_classical_circuit() {
        for inst in DeutschInstance::all() {
            let mut counter = QueryCounter::new();
            let got = classical_deutsch_two_query(&inst.oracle(), &mut counter).unwrap();
            assert_eq!(got, inst.c1);
            assert_eq!(counter.count(), 2);
        }
    }

    #[test]
    fn impossibility_enumeration_refutes_all_eight_strategies() {
        let report = classical_deutsch_impossibility();
        assert_eq!(report.strategies.len(), 8);
        for s in &report.strategies {
            // Re-check the refutation independently.
            let inst = DeutschInstance {
                c0: s.falsifying_instance.0,
                c1: s.falsifying_instance.1,
            };
            let observation = inst.f(s.query_point);
            let answer = match s.postprocess {
                "const-0" => false,
                "const-1" => true,
                "identity" => observation,
                "negate" => !observation,
                other => panic!("unknown postprocess {other}"),
            };
            assert_ne!(answer, inst.c1, "strategy {s:?} not actually refuted");
        }
    }

    #[test]
    fn collision_pairs_are_observation_equal_answer_different() {
        let report = classical_deutsch_impossibility();
        for pair in report.collisions {
            let a = DeutschInstance { c0: pair.instances[0].0, c1: pair.instances[0].1 };
            let b = DeutschInstance { c0: pair.instances[1].0, c1: pair.instances[1].1 };
            assert_eq!(a.f(pair.query_point), b.f(pair.query_point));
            assert_ne!(a.c1, b.c1);
        }
        // The specific collisions: t=0 cannot split (0,0) from (0,1); t=1
        // cannot split (0,0) from (1,1).
        let t0 = DeutschInstance { c0: false, c1: false };
        let t0b = DeutschInstance { c0: false, c1: true };
        assert_eq!(t0.f(false), t0b.f(false));
        let t1 = DeutschInstance { c0: false, c1: false };
        let t1b = DeutschInstance { c0: true, c1: true };
        assert_eq!(t1.f(true), t1b.f(true));
    }
}
