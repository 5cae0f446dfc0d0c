//! Simon's problem: find the XOR-mask s of a promised oracle with
//! f(x) = f(y) iff x ⊕ y ∈ {0^n, s}.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::hadamard_matrix;
use crate::oracle::{OracleFunction, QueryCounter, RegisterMap, ReversibleQuery};
use crate::statevector::StateVector;

/// Statevector guard: a round simulates 2n qubits.
const MAX_SIMON_BITS: usize = 12;

/// An n-bit instance with a known hidden mask, for generating and checking
/// runs.
#[derive(Debug, Clone)]
pub struct SimonInstance {
    pub n: usize,
    pub s: u64,
    pub oracle: OracleFunction,
}

impl SimonInstance {
    /// Builds a random oracle with the given mask: a bijection when s = 0,
    /// otherwise a two-to-one function constant exactly on {x, x ⊕ s}.
    pub fn random_with_mask<R: Rng + ?Sized>(n: usize, s: u64, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_SIMON_BITS {
            return Err(Error::InvalidInput(format!(
                "instance width {n} out of range 1..={MAX_SIMON_BITS}"
            )));
        }
        if s >> n != 0 {
            return Err(Error::InvalidInput(format!("mask {s} does not fit in {n} bits")));
        }
        let size = 1usize << n;
        let mut values: Vec<u64> = (0..size as u64).collect();
        values.shuffle(rng);
        let mut table = vec![0u64; size];
        if s == 0 {
            table.copy_from_slice(&values);
        } else {
            let mut next = 0usize;
            for x in 0..size as u64 {
                if x < x ^ s {
                    table[x as usize] = values[next];
                    table[(x ^ s) as usize] = values[next];
                    next += 1;
                }
            }
        }
        Ok(SimonInstance {
            n,
            s,
            oracle: OracleFunction::from_table(n, n, table)?,
        })
    }

    /// Random instance with a uniformly random mask (possibly 0^n).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let s = rng.gen_range(0..1u64 << n);
        Self::random_with_mask(n, s, rng)
    }

    /// Exhaustively checks the promise f(x) = f(y) iff x ⊕ y ∈ {0, s}.
    pub fn verify_mask(&self) -> Result<()> {
        verify_mask(&self.oracle, self.s)
    }
}

/// Exhaustive XOR-mask predicate for any candidate mask.
pub fn verify_mask(oracle: &OracleFunction, s: u64) -> Result<()> {
    let n = oracle.in_bits();
    if n > MAX_SIMON_BITS {
        return Err(Error::ResourceLimit(format!(
            "mask verification over {n} bits exceeds the {MAX_SIMON_BITS}-bit cap"
        )));
    }
    let mut first_with_value = std::collections::HashMap::new();
    for x in 0..1u64 << n {
        let v = oracle.eval(x);
        if oracle.eval(x ^ s) != v {
            return Err(Error::PromiseViolation(format!(
                "f({x}) != f({x} ^ s)"
            )));
        }
        match first_with_value.get(&v) {
            None => {
                first_with_value.insert(v, x);
            }
            Some(&x0) => {
                if x0 != x && x0 != (x ^ s) {
                    return Err(Error::PromiseViolation(format!(
                        "f collides at {x0} and {x} although they differ by more than s"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Incremental GF(2) row basis in reduced echelon form.
#[derive(Debug, Default)]
struct Gf2Basis {
    rows: Vec<u64>,
}

impl Gf2Basis {
    /// Reduces `v` against the basis; inserts it if independent. Returns
    /// whether the rank grew.
    fn insert(&mut self, mut v: u64) -> bool {
        for &row in &self.rows {
            v = v.min(v ^ row);
        }
        if v == 0 {
            return false;
        }
        // Keep reduced form: eliminate the new leading bit from older rows.
        let lead = 63 - v.leading_zeros();
        for row in &mut self.rows {
            if *row >> lead & 1 == 1 {
                *row ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// For rank n-1, the unique nonzero vector orthogonal to every row.
    fn null_vector(&self, n: usize) -> Option<u64> {
        if self.rank() != n - 1 {
            return None;
        }
        let pivots: Vec<u32> = self.rows.iter().map(|r| 63 - r.leading_zeros()).collect();
        let free = (0..n as u32).rev().find(|b| !pivots.contains(b))?;
        let mut s = 1u64 << free;
        for (row, &p) in self.rows.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                s |= 1 << p;
            }
        }
        Some(s)
    }
}

/// Outcome of one Simon run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimonOutcome {
    pub mask: u64,
    /// Quantum rounds executed (one query each).
    pub rounds: u64,
    /// Total queries: one per round plus the two classical verification
    /// queries.
    pub queries: u64,
    pub aux_gates: u64,
    /// The measured vectors, each orthogonal to the mask over GF(2).
    pub collected: Vec<u64>,
}

/// Runs Simon's algorithm: repeat (H^⊗n, query, H^⊗n, measure) collecting
/// vectors orthogonal to s until their rank reaches n-1, solve the linear
/// system for the unique nonzero candidate, and distinguish s = 0^n with two
/// classical queries at 0^n and at the candidate.
pub fn simon(
    oracle: &OracleFunction,
    rng: &mut ChaCha8Rng,
    counter: &mut QueryCounter,
) -> Result<SimonOutcome> {
    let n = oracle.in_bits();
    if oracle.out_bits() != n {
        return Err(Error::InvalidInput(format!(
            "simon expects an n-to-n-bit oracle, got {} -> {}",
            n,
            oracle.out_bits()
        )));
    }
    if n == 0 || n > MAX_SIMON_BITS {
        return Err(Error::InvalidInput(format!(
            "instance width {n} out of range 1..={MAX_SIMON_BITS}"
        )));
    }
    let query = ReversibleQuery::new(oracle.clone());
    let regs = RegisterMap::contiguous(n, n);
    let h = hadamard_matrix();
    let round_budget = 20 * n as u64 + 40;
    let mut basis = Gf2Basis::default();
    let mut collected = Vec::new();
    let mut rounds = 0u64;
    let mut aux = 0u64;
    while basis.rank() < n - 1 {
        if rounds >= round_budget {
            return Err(Error::PromiseViolation(format!(
                "no rank-{} system after {rounds} rounds; the oracle likely breaks the XOR-mask promise",
                n - 1
            )));
        }
        let mut state = StateVector::zero(2 * n)?;
        for q in 0..n {
            state.apply_one_qubit(&h, q)?;
        }
        query.quantum(&mut state, &regs, counter)?;
        for q in 0..n {
            state.apply_one_qubit(&h, q)?;
        }
        aux += 2 * n as u64;
        rounds += 1;
        let (idx, _) = state.sample_index(rng);
        let w = idx >> n;
        if w != 0 {
            collected.push(w);
            basis.insert(w);
        }
    }
    let candidate = if n == 1 {
        1
    } else {
        basis
            .null_vector(n)
            .expect("rank n-1 guarantees a unique nonzero null vector")
    };
    // Two classical queries settle whether the candidate is the mask or the
    // oracle is a bijection (s = 0^n).
    let (_, f0) = query.classical(0, 0, counter)?;
    let (_, fc) = query.classical(candidate, 0, counter)?;
    let mask = if f0 == fc { candidate } else { 0 };
    Ok(SimonOutcome {
        mask,
        rounds,
        queries: rounds + 2,
        aux_gates: aux,
        collected,
    })
}
