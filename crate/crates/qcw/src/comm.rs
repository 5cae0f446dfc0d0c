//! Two-party protocols with explicit qubit/bit accounting.
//!
//! Both parties are simulated in one process over a shared statevector with
//! an ownership map; "sending qubits" transfers ownership and logs counts,
//! with no physical serialization — the cost model counts qubits, not bytes.
//! Gates touching qubits the acting party does not own abort the run.
//!
//! The distributed (f_x ∧ f_y)-query gadget follows the five-stage wiring:
//! Bob queries f_y into one ancilla, ships the k+3 involved qubits to Alice,
//! Alice queries f_x into the other ancilla, Toffolis both ancillas into the
//! result, uncomputes her ancilla, ships everything back, and Bob uncomputes
//! his. 2(k+3) qubits of communication per simulated query.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algorithms::backend::{QueryAlgorithm, QueryAlgorithmOutput, QueryBackend};
use crate::algorithms::grover::GroverOrAlgorithm;
use crate::algorithms::parity::parity_brute;
use crate::boolcircuit::{solovay_strassen, Primality};
use crate::error::{Error, Result};
use crate::gates::{hadamard_matrix, x_matrix};
use crate::numtheory::{mulmod, sieve_primes};
use crate::oracle::{OracleFunction, QueryCounter, RegisterMap, ReversibleQuery};
use crate::statevector::StateVector;

/// The two protocol parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

/// What a message carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadKind {
    Bits,
    Qubits,
}

/// One logged message.
#[derive(Debug, Clone, Serialize)]
pub struct Message {
    pub from: Party,
    pub to: Party,
    pub kind: PayloadKind,
    pub count: u64,
}

/// Ordered message log with running totals per payload kind.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ProtocolTranscript {
    pub messages: Vec<Message>,
    pub qubits_total: u64,
    pub bits_total: u64,
}

impl ProtocolTranscript {
    pub fn new() -> Self {
        ProtocolTranscript::default()
    }

    pub fn log(&mut self, from: Party, to: Party, kind: PayloadKind, count: u64) {
        match kind {
            PayloadKind::Bits => self.bits_total += count,
            PayloadKind::Qubits => self.qubits_total += count,
        }
        self.messages.push(Message { from, to, kind, count });
    }

    /// Recomputes the totals from the log; true when they match.
    pub fn totals_consistent(&self) -> bool {
        let (mut bits, mut qubits) = (0u64, 0u64);
        for m in &self.messages {
            match m.kind {
                PayloadKind::Bits => bits += m.count,
                PayloadKind::Qubits => qubits += m.count,
            }
        }
        bits == self.bits_total && qubits == self.qubits_total
    }
}

/// A party's n-bit input viewed as the function f_x(i) = x_i, n = 2^k.
#[derive(Debug, Clone)]
pub struct BitstringOracle {
    bits: Vec<bool>,
    k: usize,
}

impl BitstringOracle {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        let n = bits.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "bitstring length {n} is not a power of two >= 2"
            )));
        }
        Ok(BitstringOracle {
            k: n.trailing_zeros() as usize,
            bits,
        })
    }

    pub fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("bad bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn index_bits(&self) -> usize {
        self.k
    }

    pub fn bit(&self, i: u64) -> bool {
        self.bits[i as usize]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The derived boolean oracle over k index bits.
    pub fn oracle_function(&self) -> OracleFunction {
        let table = self.bits.iter().map(|&b| u64::from(b)).collect();
        OracleFunction::from_table(self.k, 1, table).expect("power-of-two table")
    }
}

// --- Shared statevector with an ownership map ------------------------------

/// Qubits shared between the parties: gates are party-checked, ownership
/// changes only by sending.
#[derive(Debug, Clone)]
pub struct DistributedState {
    state: StateVector,
    owner: Vec<Party>,
}

impl DistributedState {
    pub fn new(state: StateVector, owner: Vec<Party>) -> Result<Self> {
        if owner.len() != state.num_qubits() {
            return Err(Error::InvalidInput(format!(
                "{} owners for {} qubits",
                owner.len(),
                state.num_qubits()
            )));
        }
        Ok(DistributedState { state, owner })
    }

    /// |0...0⟩ with every qubit owned by one party.
    pub fn zeros_owned_by(num_qubits: usize, party: Party) -> Result<Self> {
        Ok(DistributedState {
            state: StateVector::zero(num_qubits)?,
            owner: vec![party; num_qubits],
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn owner_of(&self, qubit: usize) -> Party {
        self.owner[qubit]
    }

    fn check_owner(&self, party: Party, qubits: &[usize]) -> Result<()> {
        for &q in qubits {
            if q >= self.owner.len() {
                return Err(Error::InvalidInput(format!("qubit {q} out of range")));
            }
            if self.owner[q] != party {
                return Err(Error::Ownership(format!(
                    "{party:?} acted on qubit {q}, which {:?} owns",
                    self.owner[q]
                )));
            }
        }
        Ok(())
    }

    pub fn apply_one_qubit(
        &mut self,
        party: Party,
        u: &crate::gates::UnitaryMatrix,
        q: usize,
    ) -> Result<()> {
        self.check_owner(party, &[q])?;
        self.state.apply_one_qubit(u, q)
    }

    pub fn apply_toffoli(&mut self, party: Party, c0: usize, c1: usize, t: usize) -> Result<()> {
        self.check_owner(party, &[c0, c1, t])?;
        self.state.apply_toffoli(c0, c1, t)
    }

    pub fn apply_cnot(&mut self, party: Party, control: usize, target: usize) -> Result<()> {
        self.check_owner(party, &[control, target])?;
        self.state.apply_controlled(&x_matrix(), control, target)
    }

    pub fn apply_query(
        &mut self,
        party: Party,
        query: &ReversibleQuery,
        regs: &RegisterMap,
        counter: &mut QueryCounter,
    ) -> Result<()> {
        let touched: Vec<usize> = regs.input.iter().chain(&regs.output).copied().collect();
        self.check_owner(party, &touched)?;
        query.quantum(&mut self.state, regs, counter)
    }

    /// Phase -1 on basis states where the value of the listed qubits (read
    /// most significant first) satisfies the predicate.
    pub fn phase_flip_on(
        &mut self,
        party: Party,
        qubits: &[usize],
        pred: impl Fn(u64) -> bool,
    ) -> Result<()> {
        self.check_owner(party, qubits)?;
        let width = self.state.num_qubits();
        let shifts: Vec<u32> = qubits.iter().map(|&q| (width - 1 - q) as u32).collect();
        self.state.phase_flip(|b| {
            let mut v = 0u64;
            for &s in &shifts {
                v = (v << 1) | ((b.index >> s) & 1);
            }
            pred(v)
        });
        Ok(())
    }

    /// Transfers ownership of the listed qubits and logs one qubit message.
    pub fn send(
        &mut self,
        from: Party,
        to: Party,
        qubits: &[usize],
        transcript: &mut ProtocolTranscript,
    ) -> Result<()> {
        self.check_owner(from, qubits)?;
        for &q in qubits {
            self.owner[q] = to;
        }
        transcript.log(from, to, PayloadKind::Qubits, qubits.len() as u64);
        Ok(())
    }

    /// Samples every qubit; the measuring party must own them all.
    pub fn sample_all(&self, party: Party, rng: &mut ChaCha8Rng) -> Result<u64> {
        let all: Vec<usize> = (0..self.owner.len()).collect();
        self.check_owner(party, &all)?;
        Ok(self.state.sample_index(rng).0)
    }
}

// --- Classical protocols ----------------------------------------------------

/// Baseline protocol for any function of the 2n input bits: Alice ships her
/// whole string and Bob evaluates.
pub fn trivial_protocol(
    x: &[bool],
    y: &[bool],
    g: impl Fn(&[bool], &[bool]) -> bool,
) -> Result<(bool, ProtocolTranscript)> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "input lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let mut transcript = ProtocolTranscript::new();
    transcript.log(Party::Alice, Party::Bob, PayloadKind::Bits, x.len() as u64);
    Ok((g(x, y), transcript))
}

/// The finite field both parties agree on: the smallest prime in [2n, 4n],
/// found by sieve and certified by Solovay–Strassen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FingerprintField {
    p: u64,
}

impl FingerprintField {
    pub fn for_length(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "fingerprinting needs n >= 2, got {n}"
            )));
        }
        let lo = 2 * n as u64;
        let hi = 4 * n as u64;
        let p = sieve_primes(hi)
            .into_iter()
            .find(|&p| p >= lo)
            .ok_or_else(|| Error::InvalidInput(format!("no prime in [{lo}, {hi}]")))?;
        let mut cert_rng = ChaCha8Rng::seed_from_u64(0x5eed);
        if p > 7 && solovay_strassen(p, 20, &mut cert_rng)? != Primality::ProbablyPrime {
            return Err(Error::InvalidInput(format!("sieve produced non-prime {p}")));
        }
        Ok(FingerprintField { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Bits needed to ship one field element.
    pub fn element_bits(&self) -> u64 {
        64 - (self.p - 1).leading_zeros() as u64
    }

    /// p_x(t) = x_0 + x_1·t + … + x_{n-1}·t^{n-1} over the field.
    pub fn eval_poly(&self, x: &[bool], t: u64) -> u64 {
        let mut acc = 0u64;
        for &bit in x.iter().rev() {
            acc = mulmod(acc, t, self.p);
            if bit {
                acc = (acc + 1) % self.p;
            }
        }
        acc
    }
}

/// Protocol-level round count for a target error: ⌈log2(1/ε)⌉.
pub fn fp_rounds_for_eps(eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "error budget ε must lie in (0, 0.5], got {eps}"
        )));
    }
    Ok((1.0 / eps).log2().ceil() as u32)
}

/// Randomized equality by polynomial fingerprinting: Alice sends
/// `fp_rounds` pairs (t_i, p_x(t_i)); Bob accepts iff p_y matches on all of
/// them. Equal inputs are always accepted; unequal inputs are accepted with
/// probability at most ((n-1)/p)^fp_rounds ≤ 2^-fp_rounds.
pub fn eq_fingerprint(
    x: &[bool],
    y: &[bool],
    fp_rounds: u32,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, ProtocolTranscript)> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "input lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidInput("fingerprinting needs n >= 2".into()));
    }
    if fp_rounds == 0 {
        return Err(Error::InvalidInput("at least one round required".into()));
    }
    let field = FingerprintField::for_length(x.len())?;
    // Alice's side: random evaluation points and her polynomial values.
    let pairs: Vec<(u64, u64)> = (0..fp_rounds)
        .map(|_| {
            let t = rng.gen_range(0..field.prime());
            (t, field.eval_poly(x, t))
        })
        .collect();
    let mut transcript = ProtocolTranscript::new();
    transcript.log(
        Party::Alice,
        Party::Bob,
        PayloadKind::Bits,
        u64::from(fp_rounds) * 2 * field.element_bits(),
    );
    // Bob's side: compare against his polynomial.
    let accept = pairs.iter().all(|&(t, px)| field.eval_poly(y, t) == px);
    Ok((accept, transcript))
}

// --- The distributed query gadget ------------------------------------------

/// How the two local functions combine into the simulated query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    And,
    Or,
    Xor,
}

/// Register layout of the gadget: k index qubits, Bob's ancilla, Alice's
/// ancilla, then the result qubit.
#[derive(Debug, Clone)]
pub struct GadgetRegisters {
    pub index: Vec<usize>,
    pub anc_y: usize,
    pub anc_x: usize,
    pub result: usize,
}

impl GadgetRegisters {
    pub fn contiguous(k: usize) -> Self {
        GadgetRegisters {
            index: (0..k).collect(),
            anc_y: k,
            anc_x: k + 1,
            result: k + 2,
        }
    }

    fn all(&self) -> Vec<usize> {
        let mut v = self.index.clone();
        v.push(self.anc_y);
        v.push(self.anc_x);
        v.push(self.result);
        v
    }
}

/// One distributed (f_x ∧ f_y)-query (or ∨ / ⊕ by the same shuttle): on
/// basis states |i⟩|0⟩|0⟩|j⟩ ↦ |i⟩|0⟩|0⟩|j ⊕ (f_x ∘ f_y)(i)⟩. Costs exactly
/// 2(k+3) qubits of communication and one tick of the query counter.
pub fn distributed_combined_query(
    d: &mut DistributedState,
    f_x: &BitstringOracle,
    f_y: &BitstringOracle,
    op: CombineOp,
    regs: &GadgetRegisters,
    transcript: &mut ProtocolTranscript,
    counter: &mut QueryCounter,
) -> Result<()> {
    let k = regs.index.len();
    if f_x.index_bits() != k || f_y.index_bits() != k {
        return Err(Error::InvalidInput(format!(
            "oracles take {} and {} index bits, register has {k}",
            f_x.index_bits(),
            f_y.index_bits()
        )));
    }
    // Ancillas must arrive clean.
    let dirty = {
        let anc_y = regs.anc_y;
        let anc_x = regs.anc_x;
        d.state().probability_of(|b| b.bit(anc_y) || b.bit(anc_x))
    };
    if dirty > 1e-9 {
        return Err(Error::Precondition(format!(
            "gadget ancillas are not |0⟩ (weight {dirty:.3e})"
        )));
    }
    let all = regs.all();
    d.check_owner(Party::Bob, &all)?;

    let x_gate = x_matrix();
    let y_query = ReversibleQuery::new(f_y.oracle_function());
    let x_query = ReversibleQuery::new(f_x.oracle_function());
    let y_regs = RegisterMap {
        input: regs.index.clone(),
        output: vec![regs.anc_y],
    };
    let x_regs = RegisterMap {
        input: regs.index.clone(),
        output: vec![regs.anc_x],
    };
    // Inner f_x/f_y applications are the gadget's plumbing; only the
    // combined query is counted.
    let mut scratch = QueryCounter::new();

    // Bob computes f_y into his ancilla.
    d.apply_query(Party::Bob, &y_query, &y_regs, &mut scratch)?;
    if op == CombineOp::Or {
        d.apply_one_qubit(Party::Bob, &x_gate, regs.anc_y)?;
    }
    // Bob ships the k+3 involved qubits.
    d.send(Party::Bob, Party::Alice, &all, transcript)?;
    // Alice: f_x in, combine, f_x out.
    d.apply_query(Party::Alice, &x_query, &x_regs, &mut scratch)?;
    match op {
        CombineOp::And => {
            d.apply_toffoli(Party::Alice, regs.anc_x, regs.anc_y, regs.result)?;
        }
        CombineOp::Or => {
            d.apply_one_qubit(Party::Alice, &x_gate, regs.anc_x)?;
            d.apply_toffoli(Party::Alice, regs.anc_x, regs.anc_y, regs.result)?;
            d.apply_one_qubit(Party::Alice, &x_gate, regs.result)?;
            d.apply_one_qubit(Party::Alice, &x_gate, regs.anc_x)?;
        }
        CombineOp::Xor => {
            d.apply_cnot(Party::Alice, regs.anc_x, regs.result)?;
            d.apply_cnot(Party::Alice, regs.anc_y, regs.result)?;
        }
    }
    d.apply_query(Party::Alice, &x_query, &x_regs, &mut scratch)?;
    // Alice ships everything back.
    d.send(Party::Alice, Party::Bob, &all, transcript)?;
    // Bob uncomputes his ancilla.
    if op == CombineOp::Or {
        d.apply_one_qubit(Party::Bob, &x_gate, regs.anc_y)?;
    }
    d.apply_query(Party::Bob, &y_query, &y_regs, &mut scratch)?;

    counter.increment();
    Ok(())
}

/// The ∧ special case of [`distributed_combined_query`]: f_y in, shuttle,
/// f_x in, Toffoli, f_x out, shuttle, f_y out.
pub fn distributed_and_query(
    d: &mut DistributedState,
    f_x: &BitstringOracle,
    f_y: &BitstringOracle,
    regs: &GadgetRegisters,
    transcript: &mut ProtocolTranscript,
    counter: &mut QueryCounter,
) -> Result<()> {
    distributed_combined_query(d, f_x, f_y, CombineOp::And, regs, transcript, counter)
}

/// Backend that realizes every oracle access of a query algorithm as the
/// distributed gadget, accumulating communication in a transcript.
pub struct DistributedBackend {
    dist: DistributedState,
    f_x: BitstringOracle,
    f_y: BitstringOracle,
    op: CombineOp,
    regs: GadgetRegisters,
    transcript: ProtocolTranscript,
    counter: QueryCounter,
    aux: u64,
}

impl DistributedBackend {
    pub fn new(f_x: BitstringOracle, f_y: BitstringOracle, op: CombineOp) -> Result<Self> {
        if f_x.n() != f_y.n() {
            return Err(Error::InvalidInput(format!(
                "input lengths differ: {} vs {}",
                f_x.n(),
                f_y.n()
            )));
        }
        let k = f_x.index_bits();
        let mut backend = DistributedBackend {
            dist: DistributedState::zeros_owned_by(k + 3, Party::Bob)?,
            f_x,
            f_y,
            op,
            regs: GadgetRegisters::contiguous(k),
            transcript: ProtocolTranscript::new(),
            counter: QueryCounter::new(),
            aux: 0,
        };
        backend.reset()?;
        Ok(backend)
    }

    pub fn transcript(&self) -> &ProtocolTranscript {
        &self.transcript
    }

    pub fn into_transcript(self) -> ProtocolTranscript {
        self.transcript
    }
}

impl QueryBackend for DistributedBackend {
    fn index_bits(&self) -> usize {
        self.regs.index.len()
    }

    fn reset(&mut self) -> Result<()> {
        let k = self.index_bits();
        self.dist = DistributedState::zeros_owned_by(k + 3, Party::Bob)?;
        // Kickback target |−⟩ on the result qubit.
        self.dist
            .apply_one_qubit(Party::Bob, &x_matrix(), self.regs.result)?;
        self.dist
            .apply_one_qubit(Party::Bob, &hadamard_matrix(), self.regs.result)?;
        self.aux += 2;
        Ok(())
    }

    fn oracle_query(&mut self) -> Result<()> {
        distributed_combined_query(
            &mut self.dist,
            &self.f_x,
            &self.f_y,
            self.op,
            &self.regs,
            &mut self.transcript,
            &mut self.counter,
        )
    }

    fn hadamard_index(&mut self) -> Result<()> {
        let h = hadamard_matrix();
        for &q in &self.regs.index.clone() {
            self.dist.apply_one_qubit(Party::Bob, &h, q)?;
        }
        self.aux += self.regs.index.len() as u64;
        Ok(())
    }

    fn reflect_about_zero(&mut self) -> Result<()> {
        self.dist
            .phase_flip_on(Party::Bob, &self.regs.index.clone(), |v| v != 0)?;
        self.aux += 1;
        Ok(())
    }

    fn measure_index(&mut self, rng: &mut ChaCha8Rng) -> Result<u64> {
        let sample = self.dist.sample_all(Party::Bob, rng)?;
        Ok(sample >> 3)
    }

    fn classical_query(&mut self, i: u64) -> Result<bool> {
        // The same gadget run on a basis state; deterministic outcome.
        let k = self.index_bits();
        if i >> k != 0 {
            return Err(Error::ContractViolation(format!(
                "query point {i} lies outside the oracle's {k}-bit domain"
            )));
        }
        let mut scratch = DistributedState::new(
            StateVector::basis_index(k + 3, i << 3)?,
            vec![Party::Bob; k + 3],
        )?;
        distributed_combined_query(
            &mut scratch,
            &self.f_x,
            &self.f_y,
            self.op,
            &self.regs,
            &mut self.transcript,
            &mut self.counter,
        )?;
        let result_bit = self.regs.result;
        Ok(scratch.state().probability_of(|b| b.bit(result_bit)) > 0.5)
    }

    fn index_probability(&self, pred: &dyn Fn(u64) -> bool) -> f64 {
        self.dist.state().probability_of(|b| pred(b.index >> 3))
    }

    fn queries(&self) -> u64 {
        self.counter.count()
    }

    fn aux_gates(&self) -> u64 {
        self.aux
    }
}

/// Output of a compiled protocol run.
#[derive(Debug, Clone)]
pub struct CompiledProtocolRun {
    pub output: QueryAlgorithmOutput,
    pub queries: u64,
    pub transcript: ProtocolTranscript,
}

/// Runs a query algorithm at Bob with every (f_x ∘ f_y)-query replaced by
/// the distributed simulation. Total qubit communication is exactly
/// (#oracle queries) · 2(k+3).
pub fn compile_query_to_protocol(
    algorithm: &dyn QueryAlgorithm,
    op: CombineOp,
    x: &[bool],
    y: &[bool],
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<CompiledProtocolRun> {
    let f_x = BitstringOracle::new(x.to_vec())?;
    let f_y = BitstringOracle::new(y.to_vec())?;
    let mut backend = DistributedBackend::new(f_x, f_y, op)?;
    let output = algorithm.run(&mut backend, eps, rng)?;
    let queries = backend.queries();
    Ok(CompiledProtocolRun {
        output,
        queries,
        transcript: backend.into_transcript(),
    })
}

/// Result of the intersection protocol.
#[derive(Debug, Clone)]
pub struct IntersectionRun {
    /// Whether a common 1-position was found (the protocol's IN verdict).
    pub found: bool,
    /// The verified common index, when found.
    pub witness: Option<u64>,
    /// Simulated (f_x ∧ f_y)-queries.
    pub queries: u64,
    /// Bob's local non-query gates.
    pub aux_gates: u64,
    /// Witness confirmed against both inputs by the classical exchange.
    pub verified: bool,
    pub transcript: ProtocolTranscript,
}

const MAX_INTERSECTION_K: usize = 10;

/// Quantum protocol for the intersection problem: Grover-OR over the
/// distributed (f_x ∧ f_y)-query, plus a two-message classical exchange that
/// confirms a found witness (Bob ships the index, Alice answers with her
/// bit). The classical confirmation is logged as bits, separate from the
/// qubit total.
pub fn intersection_protocol(
    x: &[bool],
    y: &[bool],
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<IntersectionRun> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "input lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let f_x = BitstringOracle::new(x.to_vec())?;
    let f_y = BitstringOracle::new(y.to_vec())?;
    let k = f_x.index_bits();
    if k > MAX_INTERSECTION_K {
        return Err(Error::ResourceLimit(format!(
            "intersection over 2^{k} positions exceeds the 2^{MAX_INTERSECTION_K} cap"
        )));
    }
    let mut backend = DistributedBackend::new(f_x, f_y, CombineOp::And)?;
    let run = GroverOrAlgorithm.run(&mut backend, eps, rng)?;
    let queries = backend.queries();
    let aux_gates = backend.aux_gates();
    let mut transcript = backend.into_transcript();
    let (witness, verified) = match run.witness {
        Some(i) => {
            // Bob -> Alice: the candidate index. Alice -> Bob: her bit.
            transcript.log(Party::Bob, Party::Alice, PayloadKind::Bits, k.max(1) as u64);
            let alice_bit = x[i as usize];
            transcript.log(Party::Alice, Party::Bob, PayloadKind::Bits, 1);
            let ok = alice_bit && y[i as usize];
            (Some(i), ok)
        }
        None => (None, false),
    };
    Ok(IntersectionRun {
        found: run.bit && verified,
        witness,
        queries,
        aux_gates,
        verified,
        transcript,
    })
}

/// Both routes to the inner-product bit: the defining fold
/// (x_0∧y_0) ⊕ (x_1∧y_1) ⊕ … and PARITY(f_x ∧ f_y) by brute-force queries.
/// The two components are always equal.
pub fn ip_parity_identity(x: &[bool], y: &[bool]) -> Result<(bool, bool)> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "input lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() > 1 << 16 {
        return Err(Error::ResourceLimit(
            "inner product capped at 2^16 bits".into(),
        ));
    }
    let direct = x.iter().zip(y).fold(false, |acc, (&a, &b)| acc ^ (a && b));
    let f_x = BitstringOracle::new(x.to_vec())?;
    let f_y = BitstringOracle::new(y.to_vec())?;
    let k = f_x.index_bits();
    let and_oracle = OracleFunction::from_fn(k, 1, move |i| u64::from(f_x.bit(i) && f_y.bit(i)));
    let mut counter = QueryCounter::new();
    let brute = parity_brute(&and_oracle, &mut counter)?;
    debug_assert_eq!(counter.count(), 1 << k);
    Ok((direct, brute))
}

/// Transcript JSON with run metadata, the external interface for protocol
/// runs.
#[derive(Debug, Clone, Serialize)]
pub struct TranscriptJson {
    pub protocol: String,
    pub n: usize,
    pub seed: u64,
    pub messages: Vec<Message>,
    pub qubits_total: u64,
    pub bits_total: u64,
    pub output: serde_json::Value,
    pub verified: bool,
}

impl TranscriptJson {
    pub fn new(
        protocol: &str,
        n: usize,
        seed: u64,
        transcript: &ProtocolTranscript,
        output: serde_json::Value,
        verified: bool,
    ) -> Self {
        TranscriptJson {
            protocol: protocol.to_string(),
            n,
            seed,
            messages: transcript.messages.clone(),
            qubits_total: transcript.qubits_total,
            bits_total: transcript.bits_total,
            output,
            verified,
        }
    }
}
