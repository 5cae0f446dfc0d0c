//! Reversible query gates, query counting, and compilation of boolean
//! circuits into ancilla-clean reversible oracles.
//!
//! A reversible f-query maps (x, y) to (x, y ⊕ f(x)) and is its own inverse.
//! [`compile_bool_circuit`] lowers a classical circuit into {X, CNOT,
//! Toffoli} gates over input/output/ancilla registers using the
//! compute–copy–uncompute discipline, so every ancilla returns to |0⟩ on
//! every basis input.

use std::sync::Arc;

use rand::Rng;

use crate::boolcircuit::{BoolCircuit, NodeKind};
use crate::error::{Error, Result};
use crate::gates::{Gate, GateKind, QuantumCircuit};
use crate::numtheory::{gcd, mulmod, powmod};
use crate::statevector::StateVector;

/// Dense truth tables above this input width are refused.
const MAX_TABLE_BITS: usize = 24;

/// Counts oracle invocations, classical or quantum.
#[derive(Debug, Default, Clone)]
pub struct QueryCounter {
    count: u64,
}

impl QueryCounter {
    pub fn new() -> Self {
        QueryCounter::default()
    }

    pub fn increment(&mut self) {
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

#[derive(Clone)]
enum Backing {
    Table(Arc<Vec<u64>>),
    Callable(Arc<dyn Fn(u64) -> u64 + Send + Sync>),
}

/// A total function {0,1}^m -> {0,1}^k, dense table or callable.
#[derive(Clone)]
pub struct OracleFunction {
    in_bits: usize,
    out_bits: usize,
    backing: Backing,
}

impl std::fmt::Debug for OracleFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleFunction")
            .field("in_bits", &self.in_bits)
            .field("out_bits", &self.out_bits)
            .finish_non_exhaustive()
    }
}

impl OracleFunction {
    pub fn from_table(in_bits: usize, out_bits: usize, table: Vec<u64>) -> Result<Self> {
        if in_bits > MAX_TABLE_BITS {
            return Err(Error::ResourceLimit(format!(
                "dense table over {in_bits} bits exceeds the {MAX_TABLE_BITS}-bit cap"
            )));
        }
        if table.len() != 1 << in_bits {
            return Err(Error::InvalidInput(format!(
                "table has {} entries, expected {}",
                table.len(),
                1u64 << in_bits
            )));
        }
        if out_bits < 64 {
            if let Some(v) = table.iter().find(|&&v| v >> out_bits != 0) {
                return Err(Error::InvalidInput(format!(
                    "table value {v} does not fit in {out_bits} bits"
                )));
            }
        }
        Ok(OracleFunction {
            in_bits,
            out_bits,
            backing: Backing::Table(Arc::new(table)),
        })
    }

    /// Callable backing for domains too large to tabulate.
    pub fn from_fn(
        in_bits: usize,
        out_bits: usize,
        f: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        OracleFunction {
            in_bits,
            out_bits,
            backing: Backing::Callable(Arc::new(f)),
        }
    }

    /// Boolean indicator oracle: f(x) = 1 iff x is in `marked`.
    pub fn indicator(in_bits: usize, marked: &[u64]) -> Result<Self> {
        let mut table = vec![0u64; 1 << in_bits];
        for &m in marked {
            if m >> in_bits != 0 {
                return Err(Error::InvalidInput(format!(
                    "marked point {m} out of range for {in_bits} bits"
                )));
            }
            table[m as usize] = 1;
        }
        OracleFunction::from_table(in_bits, 1, table)
    }

    /// Uniformly random boolean oracle.
    pub fn random_boolean<R: Rng + ?Sized>(in_bits: usize, rng: &mut R) -> Self {
        let table = (0..1u64 << in_bits).map(|_| u64::from(rng.gen::<bool>())).collect();
        OracleFunction::from_table(in_bits, 1, table).expect("generated table is valid")
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    pub fn eval(&self, x: u64) -> u64 {
        debug_assert!(self.in_bits == 64 || x >> self.in_bits == 0);
        match &self.backing {
            Backing::Table(t) => t[x as usize],
            Backing::Callable(f) => f(x),
        }
    }

    /// Negated boolean oracle; only defined for single-bit outputs.
    pub fn negated(&self) -> Result<OracleFunction> {
        if self.out_bits != 1 {
            return Err(Error::InvalidInput(
                "negation is defined for boolean oracles".into(),
            ));
        }
        let inner = self.clone();
        Ok(OracleFunction::from_fn(self.in_bits, 1, move |x| {
            inner.eval(x) ^ 1
        }))
    }

    /// Truth table of an in_bits == out_bits oracle as a permutation table,
    /// verifying bijectivity exhaustively.
    pub fn as_permutation_table(&self) -> Result<Vec<u64>> {
        if self.in_bits != self.out_bits {
            return Err(Error::InvalidInput(format!(
                "a permutation needs matching widths, got {} -> {}",
                self.in_bits, self.out_bits
            )));
        }
        if self.in_bits > MAX_TABLE_BITS {
            return Err(Error::ResourceLimit(format!(
                "cannot tabulate a permutation over {} bits",
                self.in_bits
            )));
        }
        let size = 1usize << self.in_bits;
        let mut seen = vec![false; size];
        let mut table = Vec::with_capacity(size);
        for x in 0..size as u64 {
            let y = self.eval(x) as usize;
            if y >= size || seen[y] {
                return Err(Error::InvalidInput(format!(
                    "oracle is not a bijection: value {y} repeats or overflows"
                )));
            }
            seen[y] = true;
            table.push(y as u64);
        }
        Ok(table)
    }
}

/// Where a query's input and output registers live inside a wider state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterMap {
    /// Qubit indices of the input register, most significant first.
    pub input: Vec<usize>,
    /// Qubit indices of the output register, most significant first.
    pub output: Vec<usize>,
}

impl RegisterMap {
    /// Input register `0..m`, output register `m..m+k`.
    pub fn contiguous(m: usize, k: usize) -> Self {
        RegisterMap {
            input: (0..m).collect(),
            output: (m..m + k).collect(),
        }
    }
}

/// The reversible form of an oracle: the self-inverse bijection
/// (x, y) -> (x, y ⊕ f(x)) on {0,1}^(m+k).
#[derive(Debug, Clone)]
pub struct ReversibleQuery {
    oracle: OracleFunction,
}

impl ReversibleQuery {
    pub fn new(oracle: OracleFunction) -> Self {
        ReversibleQuery { oracle }
    }

    pub fn oracle(&self) -> &OracleFunction {
        &self.oracle
    }

    /// One classical query: returns (x, y ⊕ f(x)) and bumps the counter.
    pub fn classical(&self, x: u64, y: u64, counter: &mut QueryCounter) -> Result<(u64, u64)> {
        let m = self.oracle.in_bits;
        let k = self.oracle.out_bits;
        if m < 64 && x >> m != 0 {
            return Err(Error::InvalidInput(format!("x = {x} does not fit in {m} bits")));
        }
        if k < 64 && y >> k != 0 {
            return Err(Error::InvalidInput(format!("y = {y} does not fit in {k} bits")));
        }
        counter.increment();
        Ok((x, y ^ self.oracle.eval(x)))
    }

    /// One quantum query: permutes the basis states of `state` by
    /// |x⟩|y⟩ -> |x⟩|y ⊕ f(x)⟩ on the mapped registers.
    pub fn quantum(
        &self,
        state: &mut StateVector,
        regs: &RegisterMap,
        counter: &mut QueryCounter,
    ) -> Result<()> {
        let m = self.oracle.in_bits;
        let k = self.oracle.out_bits;
        if regs.input.len() != m || regs.output.len() != k {
            return Err(Error::InvalidInput(format!(
                "register map sizes {}/{} do not match oracle widths {m}/{k}",
                regs.input.len(),
                regs.output.len()
            )));
        }
        let width = state.num_qubits();
        let mut seen = vec![false; width];
        for &q in regs.input.iter().chain(&regs.output) {
            if q >= width {
                return Err(Error::InvalidInput(format!(
                    "register qubit {q} out of range for {width} qubits"
                )));
            }
            if seen[q] {
                return Err(Error::InvalidInput(format!(
                    "registers overlap at qubit {q}"
                )));
            }
            seen[q] = true;
        }
        // The qubit at position q holds index bit width-1-q.
        let in_shifts: Vec<u32> = regs.input.iter().map(|&q| (width - 1 - q) as u32).collect();
        let out_shifts: Vec<u32> = regs.output.iter().map(|&q| (width - 1 - q) as u32).collect();
        let oracle = &self.oracle;
        state.permute_unchecked(|z| {
            let mut x = 0u64;
            for &s in &in_shifts {
                x = (x << 1) | ((z >> s) & 1);
            }
            let fx = oracle.eval(x);
            let mut z = z;
            for (bit, &s) in out_shifts.iter().rev().enumerate() {
                z ^= ((fx >> bit) & 1) << s;
            }
            z
        });
        counter.increment();
        Ok(())
    }
}

/// Reversible quantum realization of a boolean circuit over input, output,
/// and ancilla registers.
#[derive(Debug, Clone)]
pub struct CompiledOracle {
    circuit: QuantumCircuit,
    num_inputs: usize,
    num_outputs: usize,
    num_ancillas: usize,
}

impl CompiledOracle {
    pub fn circuit(&self) -> &QuantumCircuit {
        &self.circuit
    }

    pub fn gate_count(&self) -> usize {
        self.circuit.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn num_ancillas(&self) -> usize {
        self.num_ancillas
    }

    pub fn num_qubits(&self) -> usize {
        self.num_inputs + self.num_outputs + self.num_ancillas
    }

    /// Classical execution on a basis state |x⟩|y⟩|0^a⟩: runs the reversible
    /// gate list bit by bit and returns the output register and the final
    /// ancilla bits (which the construction guarantees are zero).
    pub fn run_basis(&self, x: u64, y: u64) -> Result<(u64, u64)> {
        let n = self.num_inputs;
        let k = self.num_outputs;
        if n < 64 && x >> n != 0 {
            return Err(Error::InvalidInput(format!("x = {x} does not fit in {n} bits")));
        }
        if k < 64 && y >> k != 0 {
            return Err(Error::InvalidInput(format!("y = {y} does not fit in {k} bits")));
        }
        let total = self.num_qubits();
        let mut bits = vec![false; total];
        for i in 0..n {
            bits[i] = (x >> (n - 1 - i)) & 1 == 1;
        }
        for j in 0..k {
            bits[n + j] = (y >> (k - 1 - j)) & 1 == 1;
        }
        for gate in self.circuit.gates() {
            match gate.kind {
                GateKind::X => bits[gate.wires[0]] ^= true,
                GateKind::Cnot => {
                    if bits[gate.wires[0]] {
                        bits[gate.wires[1]] ^= true;
                    }
                }
                GateKind::Toffoli => {
                    if bits[gate.wires[0]] && bits[gate.wires[1]] {
                        bits[gate.wires[2]] ^= true;
                    }
                }
                // compile_bool_circuit emits only the three kinds above
                ref other => {
                    return Err(Error::Compile(format!(
                        "compiled oracle contains unexpected gate {}",
                        other.name()
                    )))
                }
            }
        }
        let mut y_out = 0u64;
        for j in 0..k {
            y_out = (y_out << 1) | u64::from(bits[n + j]);
        }
        let mut anc = 0u64;
        for t in 0..self.num_ancillas {
            anc = (anc << 1) | u64::from(bits[n + k + t]);
        }
        Ok((y_out, anc))
    }

    /// The f-query this compiled circuit realizes on its input/output
    /// registers; each evaluation executes the compiled gate list.
    pub fn as_reversible_query(&self) -> ReversibleQuery {
        let this = self.clone();
        ReversibleQuery::new(OracleFunction::from_fn(
            self.num_inputs,
            self.num_outputs,
            move |x| this.run_basis(x, 0).expect("x validated by caller").0,
        ))
    }

    /// Applies the compiled circuit to a statevector laid out as
    /// |input⟩|output⟩|ancilla⟩.
    pub fn apply_to_state(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits() {
            return Err(Error::InvalidInput(format!(
                "state has {} qubits, compiled oracle needs {}",
                state.num_qubits(),
                self.num_qubits()
            )));
        }
        state.apply_circuit(&self.circuit)
    }
}

/// Compiles a deterministic boolean circuit into a reversible oracle mapping
/// |x⟩|y⟩|0^a⟩ to |x⟩|y ⊕ C(x)⟩|0^a⟩ for the listed output nodes.
///
/// Compute phase: one ancilla per internal gate (AND becomes a Toffoli, NOT a
/// copy-and-flip, OR the three-gate p⊕q⊕(p∧q) form, XOR two CNOTs). Copy
/// phase: results are CNOT-ed into the output register; a gate feeding only
/// its output qubit is computed there directly and needs no ancilla.
/// Uncompute phase: the compute gates reversed. Total gate count is at most
/// 6·(gates of the circuit) + outputs.
pub fn compile_bool_circuit(circuit: &BoolCircuit, outputs: &[usize]) -> Result<CompiledOracle> {
    if circuit.has_coin() {
        return Err(Error::Compile(
            "cannot compile a circuit with coin-flip gates into a reversible oracle".into(),
        ));
    }
    if outputs.is_empty() {
        return Err(Error::Compile("at least one output node required".into()));
    }
    let nodes = circuit.nodes();
    for &o in outputs {
        if o >= nodes.len() {
            return Err(Error::Compile(format!("output node {o} out of range")));
        }
    }
    let n = circuit.num_inputs();
    let k = outputs.len();

    // A gate node folds into the copy phase when nothing else reads it:
    // no gate consumer and exactly one appearance in the output list.
    let mut gate_consumers = vec![0usize; nodes.len()];
    for node in nodes {
        for p in node.predecessors() {
            gate_consumers[p] += 1;
        }
    }
    let mut output_uses = vec![0usize; nodes.len()];
    for &o in outputs {
        output_uses[o] += 1;
    }
    let folded: Vec<bool> = nodes
        .iter()
        .enumerate()
        .map(|(i, kind)| {
            !matches!(kind, NodeKind::Input(_))
                && gate_consumers[i] == 0
                && output_uses[i] == 1
        })
        .collect();

    // Wire assignment: inputs on 0..n, outputs on n..n+k, one ancilla per
    // non-folded gate after that.
    let mut wire = vec![usize::MAX; nodes.len()];
    let mut next_ancilla = n + k;
    for (i, kind) in nodes.iter().enumerate() {
        match kind {
            NodeKind::Input(idx) => wire[i] = *idx,
            _ if folded[i] => {}
            _ => {
                wire[i] = next_ancilla;
                next_ancilla += 1;
            }
        }
    }
    let num_ancillas = next_ancilla - n - k;
    let total = n + k + num_ancillas;

    let mut qc = QuantumCircuit::new(total);
    let mut compute: Vec<Gate> = Vec::new();
    let emit = |gates: &mut Vec<Gate>, kind: NodeKind, target: usize, wire: &[usize]| -> Result<()> {
        match kind {
            NodeKind::Not(p) => {
                gates.push(Gate::new(GateKind::Cnot, vec![wire[p], target])?);
                gates.push(Gate::new(GateKind::X, vec![target])?);
            }
            NodeKind::And(p, q) => {
                gates.push(Gate::new(GateKind::Toffoli, vec![wire[p], wire[q], target])?);
            }
            NodeKind::Or(p, q) => {
                gates.push(Gate::new(GateKind::Cnot, vec![wire[p], target])?);
                gates.push(Gate::new(GateKind::Cnot, vec![wire[q], target])?);
                gates.push(Gate::new(GateKind::Toffoli, vec![wire[p], wire[q], target])?);
            }
            NodeKind::Xor(p, q) => {
                gates.push(Gate::new(GateKind::Cnot, vec![wire[p], target])?);
                gates.push(Gate::new(GateKind::Cnot, vec![wire[q], target])?);
            }
            NodeKind::Input(_) | NodeKind::Coin => {
                return Err(Error::Compile("inputs and coins are not compute gates".into()))
            }
        }
        Ok(())
    };

    for (i, kind) in nodes.iter().enumerate() {
        if matches!(kind, NodeKind::Input(_)) || folded[i] {
            continue;
        }
        emit(&mut compute, *kind, wire[i], &wire)?;
    }
    for gate in &compute {
        qc.push(gate.clone())?;
    }
    // Copy phase.
    for (j, &o) in outputs.iter().enumerate() {
        let target = n + j;
        if folded[o] {
            let mut gates = Vec::new();
            emit(&mut gates, nodes[o], target, &wire)?;
            for g in gates {
                qc.push(g)?;
            }
        } else {
            qc.push(Gate::new(GateKind::Cnot, vec![wire[o], target])?)?;
        }
    }
    // Uncompute phase: the compute gates are involutions, so the reversed
    // list undoes them.
    for gate in compute.iter().rev() {
        qc.push(gate.clone())?;
    }

    Ok(CompiledOracle {
        circuit: qc,
        num_inputs: n,
        num_outputs: k,
        num_ancillas,
    })
}

/// The modular-exponentiation oracle f_{a,N}(x, y) = (x, a^x·y mod N) for
/// y < N, extended by the identity for N ≤ y < 2^n. Already reversible.
pub fn modexp_oracle(a: u64, big_n: u64, n: usize) -> Result<OracleFunction> {
    if gcd(a, big_n) != 1 {
        return Err(Error::InvalidInput(format!(
            "a = {a} and N = {big_n} share the factor {}",
            gcd(a, big_n)
        )));
    }
    if n == 0 || n > 24 {
        return Err(Error::InvalidInput(format!("register width {n} out of range")));
    }
    if big_n >> n != 0 {
        return Err(Error::InvalidInput(format!(
            "N = {big_n} does not fit in {n} bits"
        )));
    }
    let mask = (1u64 << n) - 1;
    Ok(OracleFunction::from_fn(2 * n, 2 * n, move |z| {
        let x = z >> n;
        let y = z & mask;
        let y_out = if y < big_n {
            mulmod(powmod(a, x, big_n), y, big_n)
        } else {
            y
        };
        (x << n) | y_out
    }))
}

// --- Truth-table file format ---------------------------------------------

/// Parses the truth-table text format: one line per input, `x -> f(x)` in
/// binary. Every input of the domain must appear exactly once.
pub fn parse_truth_table(text: &str) -> Result<OracleFunction> {
    let mut entries: Vec<(u64, u64)> = Vec::new();
    let mut in_bits = None;
    let mut out_bits = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("line {}: expected `x -> f(x)`", lineno + 1)))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        let parse_bits = |s: &str| -> Result<u64> {
            if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::Parse(format!(
                    "line {}: not a bitstring: {s:?}",
                    lineno + 1
                )));
            }
            Ok(u64::from_str_radix(s, 2).expect("validated binary"))
        };
        let x = parse_bits(lhs)?;
        let fx = parse_bits(rhs)?;
        match in_bits {
            None => in_bits = Some(lhs.len()),
            Some(m) if m != lhs.len() => {
                return Err(Error::Parse(format!(
                    "line {}: input width {} differs from {m}",
                    lineno + 1,
                    lhs.len()
                )))
            }
            _ => {}
        }
        match out_bits {
            None => out_bits = Some(rhs.len()),
            Some(k) if k != rhs.len() => {
                return Err(Error::Parse(format!(
                    "line {}: output width {} differs from {k}",
                    lineno + 1,
                    rhs.len()
                )))
            }
            _ => {}
        }
        entries.push((x, fx));
    }
    let (m, k) = match (in_bits, out_bits) {
        (Some(m), Some(k)) => (m, k),
        _ => return Err(Error::Parse("empty truth table".into())),
    };
    if m > MAX_TABLE_BITS {
        return Err(Error::ResourceLimit(format!(
            "truth table over {m} bits exceeds the {MAX_TABLE_BITS}-bit cap"
        )));
    }
    let size = 1usize << m;
    let mut table = vec![None; size];
    for (x, fx) in entries {
        let slot = &mut table[x as usize];
        if slot.is_some() {
            return Err(Error::Parse(format!("duplicate entry for input {x:0m$b}")));
        }
        *slot = Some(fx);
    }
    let table: Vec<u64> = table
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| Error::Parse(format!("missing entry for input {x:0m$b}"))))
        .collect::<Result<_>>()?;
    OracleFunction::from_table(m, k, table)
}

/// Renders a dense oracle in the truth-table text format.
pub fn format_truth_table(oracle: &OracleFunction) -> Result<String> {
    let m = oracle.in_bits();
    let k = oracle.out_bits();
    if m > 16 {
        return Err(Error::ResourceLimit(format!(
            "refusing to render a {m}-bit truth table as text"
        )));
    }
    let mut out = String::new();
    for x in 0..1u64 << m {
        let fx = oracle.eval(x);
        out.push_str(&format!("{x:0m$b} -> {fx:0k$b}\n"));
    }
    Ok(out)
}
