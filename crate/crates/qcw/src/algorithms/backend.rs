//! The counted oracle interface query algorithms run against.
//!
//! Algorithms never touch an oracle's truth table directly; every access
//! goes through a [`QueryBackend`], which owns the quantum state, the query
//! counter, and whatever realizes the query (a plain table, a compiled
//! reversible circuit, or the two-party distributed gadget). Swapping the
//! backend turns a query algorithm into a computational-model circuit or a
//! communication protocol without touching the algorithm itself.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::hadamard_matrix;
use crate::oracle::{CompiledOracle, OracleFunction, QueryCounter, RegisterMap, ReversibleQuery};
use crate::statevector::StateVector;

/// Oracle access for algorithms over boolean functions f: {0,1}^k -> {0,1}.
///
/// The register layout is |index (k qubits)⟩|work⟩ with the query target as
/// the last work qubit, prepared in (|0⟩-|1⟩)/√2 so an oracle query flips
/// the phase of marked index states.
pub trait QueryBackend {
    /// Width k of the index register.
    fn index_bits(&self) -> usize;

    /// Restores |0^k⟩ on the index register, clears the work register, and
    /// prepares the kickback target.
    fn reset(&mut self) -> Result<()>;

    /// One reversible f-query. Counted.
    fn oracle_query(&mut self) -> Result<()>;

    /// Hadamard on every index qubit.
    fn hadamard_index(&mut self) -> Result<()>;

    /// Phase -1 on every basis state whose index register is non-zero
    /// (the reflection at the heart of the diffusion operator).
    fn reflect_about_zero(&mut self) -> Result<()>;

    /// Samples the index register.
    fn measure_index(&mut self, rng: &mut ChaCha8Rng) -> Result<u64>;

    /// One classical f-query at point `i`. Counted.
    fn classical_query(&mut self, i: u64) -> Result<bool>;

    /// Analytic probability that measuring the index register satisfies the
    /// predicate.
    fn index_probability(&self, pred: &dyn Fn(u64) -> bool) -> f64;

    /// Oracle queries so far, classical and quantum.
    fn queries(&self) -> u64;

    /// Non-query gates applied so far.
    fn aux_gates(&self) -> u64;
}

/// In-process backend: the query is applied directly as a permutation of the
/// (k+1)-qubit statevector.
pub struct LocalBackend {
    state: StateVector,
    query: ReversibleQuery,
    regs: RegisterMap,
    counter: QueryCounter,
    aux: u64,
    /// Gates one oracle application stands for (1 for a bare table oracle;
    /// the compiled circuit length when the query is a compiled oracle).
    per_query_gates: u64,
}

impl LocalBackend {
    /// Backend over a boolean oracle applied as a bare reversible query.
    pub fn new(oracle: OracleFunction) -> Result<Self> {
        if oracle.out_bits() != 1 {
            return Err(Error::InvalidInput(
                "search backends take boolean oracles".into(),
            ));
        }
        let k = oracle.in_bits();
        Ok(LocalBackend {
            state: kickback_ready_state(k, 0)?,
            query: ReversibleQuery::new(oracle),
            regs: RegisterMap::contiguous(k, 1),
            counter: QueryCounter::new(),
            aux: 1,
            per_query_gates: 1,
        })
    }

    /// Backend whose every query runs a compiled reversible circuit; the
    /// per-query gate count is the circuit length.
    pub fn from_compiled(compiled: &CompiledOracle) -> Result<Self> {
        if compiled.num_outputs() != 1 {
            return Err(Error::InvalidInput(
                "search backends take single-output compiled oracles".into(),
            ));
        }
        let k = compiled.num_inputs();
        let gates = compiled.gate_count() as u64;
        Ok(LocalBackend {
            state: kickback_ready_state(k, 0)?,
            query: compiled.as_reversible_query(),
            regs: RegisterMap::contiguous(k, 1),
            counter: QueryCounter::new(),
            aux: 1,
            per_query_gates: gates.max(1),
        })
    }

    pub fn per_query_gates(&self) -> u64 {
        self.per_query_gates
    }
}

/// |0^k⟩ ⊗ (|0⟩-|1⟩)/√2 over k+1+extra_work qubits (target last).
fn kickback_ready_state(k: usize, extra_work: usize) -> Result<StateVector> {
    let total = k + extra_work + 1;
    let mut state = StateVector::basis_index(total, 1)?;
    state.apply_one_qubit(&hadamard_matrix(), total - 1)?;
    Ok(state)
}

impl QueryBackend for LocalBackend {
    fn index_bits(&self) -> usize {
        self.query.oracle().in_bits()
    }

    fn reset(&mut self) -> Result<()> {
        self.state = kickback_ready_state(self.index_bits(), 0)?;
        self.aux += 1;
        Ok(())
    }

    fn oracle_query(&mut self) -> Result<()> {
        self.query.quantum(&mut self.state, &self.regs, &mut self.counter)
    }

    fn hadamard_index(&mut self) -> Result<()> {
        let h = hadamard_matrix();
        for q in 0..self.index_bits() {
            self.state.apply_one_qubit(&h, q)?;
        }
        self.aux += self.index_bits() as u64;
        Ok(())
    }

    fn reflect_about_zero(&mut self) -> Result<()> {
        self.state.phase_flip(|b| b.index >> 1 != 0);
        self.aux += 1;
        Ok(())
    }

    fn measure_index(&mut self, rng: &mut ChaCha8Rng) -> Result<u64> {
        let (idx, _) = self.state.sample_index(rng);
        Ok(idx >> 1)
    }

    fn classical_query(&mut self, i: u64) -> Result<bool> {
        let (_, y) = self.query.classical(i, 0, &mut self.counter)?;
        Ok(y == 1)
    }

    fn index_probability(&self, pred: &dyn Fn(u64) -> bool) -> f64 {
        self.state.probability_of(|b| pred(b.index >> 1))
    }

    fn queries(&self) -> u64 {
        self.counter.count()
    }

    fn aux_gates(&self) -> u64 {
        self.aux
    }
}

/// What a query algorithm reports back to its caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAlgorithmOutput {
    pub bit: bool,
    pub witness: Option<u64>,
}

/// A query-model algorithm over a boolean oracle, expressed against the
/// counted interface so it can run unchanged on any backend.
pub trait QueryAlgorithm {
    fn name(&self) -> &'static str;

    fn run(
        &self,
        backend: &mut dyn QueryBackend,
        eps: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<QueryAlgorithmOutput>;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn local_backend_counts_both_query_kinds() {
        let oracle = OracleFunction::indicator(3, &[5]).unwrap();
        let mut backend = LocalBackend::new(oracle).unwrap();
        backend.oracle_query().unwrap();
        assert!(backend.classical_query(5).unwrap());
        assert!(!backend.classical_query(2).unwrap());
        assert_eq!(backend.queries(), 3);
    }

    #[test]
    fn kickback_target_turns_query_into_phase_flip() {
        let oracle = OracleFunction::indicator(2, &[3]).unwrap();
        let mut backend = LocalBackend::new(oracle).unwrap();
        backend.hadamard_index().unwrap();
        let before = backend.index_probability(&|i| i == 3);
        backend.oracle_query().unwrap();
        // A phase flip changes no index probability.
        let after = backend.index_probability(&|i| i == 3);
        assert!((before - after).abs() <= 1e-12);
        // One more Hadamard layer turns the phase difference into amplitude:
        // H|+..⟩ with a flipped |11⟩ is no longer concentrated on |00⟩.
        backend.hadamard_index().unwrap();
        let zero = backend.index_probability(&|i| i == 0);
        assert!((zero - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn measure_after_reset_is_deterministic_zero() {
        let oracle = OracleFunction::indicator(2, &[1]).unwrap();
        let mut backend = LocalBackend::new(oracle).unwrap();
        backend.hadamard_index().unwrap();
        backend.reset().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(backend.measure_index(&mut rng).unwrap(), 0);
    }
}
