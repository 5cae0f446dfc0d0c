//! Gate constants, quantum circuits, and exact circuit decompositions.
//!
//! The concrete constants are the Hadamard `H`, the phase gates
//! `V = diag(1, i)` and `W = diag(1, e^{iπ/4})`, and the controlled gates
//! built from them. [`toffoli_decomposition`] and
//! [`controlled_v_decomposition`] are exact identities: their unitaries equal
//! the Toffoli matrix and `diag(1,1,1,i)` with global phase exactly 1.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Unitarity is verified on construction up to this entrywise tolerance.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Dense complex matrix of power-of-two dimension with `U·U† = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Builds a matrix from row-major entries, verifying the shape and the
    /// unitarity invariant.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "matrix dimension {dim} is not a power of two"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let m = UnitaryMatrix { dim, entries };
        if !m.is_unitary(UNITARITY_TOL) {
            return Err(Error::InvalidInput(
                "matrix is not unitary within 1e-9".into(),
            ));
        }
        Ok(m)
    }

    /// Builds a matrix known to be unitary by construction (products of
    /// verified unitaries). The check is skipped above dimension 64 where it
    /// would cost O(dim^3); smaller matrices are still verified.
    pub(crate) fn from_unitary_product(dim: usize, entries: Vec<Complex64>) -> Self {
        let m = UnitaryMatrix { dim, entries };
        debug_assert!(dim > 64 || m.is_unitary(1e-6));
        m
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::ONE;
        }
        UnitaryMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::ZERO;
                for k in 0..d {
                    acc += self.entry(i, k) * self.entry(j, k).conj();
                }
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                if (acc - expect).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::InvalidInput(format!(
                "dimension mismatch: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let d = self.dim;
        let mut entries = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * rhs.entry(k, j);
                }
            }
        }
        Ok(UnitaryMatrix::from_unitary_product(d, entries))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> UnitaryMatrix {
        let d = self.dim;
        let mut entries = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entry(i, j).conj();
            }
        }
        UnitaryMatrix { dim: d, entries }
    }

    pub fn power(&self, exp: u32) -> UnitaryMatrix {
        let mut acc = UnitaryMatrix::identity(self.dim);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, rhs: &UnitaryMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &UnitaryMatrix, tol: f64) -> bool {
        self.dim == rhs.dim && self.max_abs_diff(rhs) <= tol
    }

    /// Entrywise distance after normalizing `rhs` by the unit phase that best
    /// aligns it with `self`. Used only where a test explicitly tolerates a
    /// global phase; the exact identities never go through here.
    pub fn max_abs_diff_up_to_phase(&self, rhs: &UnitaryMatrix) -> (f64, Complex64) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        // Phase from the largest-magnitude entry of rhs.
        let (idx, _) = rhs
            .entries
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm().partial_cmp(&b.norm()).unwrap())
            .expect("non-empty matrix");
        let lambda = if rhs.entries[idx].norm() > 0.0 {
            self.entries[idx] / rhs.entries[idx]
        } else {
            Complex64::ONE
        };
        let lambda = if lambda.norm() > 0.0 {
            lambda / lambda.norm()
        } else {
            Complex64::ONE
        };
        let diff = self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| (a - lambda * b).norm())
            .fold(0.0, f64::max);
        (diff, lambda)
    }
}

/// The fixed one-, two-, and three-qubit gate kinds plus oracle placeholders.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    V,
    Vdg,
    W,
    Wdg,
    /// Pauli X, the reversible NOT.
    X,
    Cnot,
    ControlledV,
    ControlledVdg,
    /// Controlled application of an arbitrary 2x2 unitary.
    ControlledU(UnitaryMatrix),
    Toffoli,
    /// Placeholder for an oracle query; resolved by the oracle module.
    OracleQuery(String),
}

impl GateKind {
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::H | GateKind::V | GateKind::Vdg | GateKind::W | GateKind::Wdg | GateKind::X => {
                Some(1)
            }
            GateKind::Cnot
            | GateKind::ControlledV
            | GateKind::ControlledVdg
            | GateKind::ControlledU(_) => Some(2),
            GateKind::Toffoli => Some(3),
            GateKind::OracleQuery(_) => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            GateKind::H => "H",
            GateKind::V => "V",
            GateKind::Vdg => "VDG",
            GateKind::W => "W",
            GateKind::Wdg => "WDG",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::ControlledV => "CV",
            GateKind::ControlledVdg => "CVDG",
            GateKind::ControlledU(_) => "CU",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::OracleQuery(_) => "ORACLE",
        }
    }
}

/// A gate application: kind plus ordered wire indices (controls first).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub wires: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, wires: Vec<usize>) -> Result<Self> {
        if let Some(arity) = kind.arity() {
            if wires.len() != arity {
                return Err(Error::InvalidInput(format!(
                    "gate {} expects {arity} wires, got {}",
                    kind.name(),
                    wires.len()
                )));
            }
        } else if wires.is_empty() {
            return Err(Error::InvalidInput("oracle gate needs wires".into()));
        }
        for (i, w) in wires.iter().enumerate() {
            if wires[..i].contains(w) {
                return Err(Error::InvalidInput(format!(
                    "gate {} uses wire {w} twice",
                    kind.name()
                )));
            }
        }
        Ok(Gate { kind, wires })
    }

    /// The inverse gate; applying a gate then its adjoint is the identity.
    pub fn adjoint(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::V => GateKind::Vdg,
            GateKind::Vdg => GateKind::V,
            GateKind::W => GateKind::Wdg,
            GateKind::Wdg => GateKind::W,
            GateKind::ControlledV => GateKind::ControlledVdg,
            GateKind::ControlledVdg => GateKind::ControlledV,
            GateKind::ControlledU(u) => GateKind::ControlledU(u.adjoint()),
            other => other.clone(),
        };
        Gate {
            kind,
            wires: self.wires.clone(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Ordered gate list on `num_qubits` wires; gates apply in list order
/// (leftmost in a circuit diagram first).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCircuit {
    pub num_qubits: usize,
    gates: Vec<Gate>,
}

impl QuantumCircuit {
    pub fn new(num_qubits: usize) -> Self {
        QuantumCircuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&w) = gate.wires.iter().find(|&&w| w >= self.num_qubits) {
            return Err(Error::InvalidInput(format!(
                "wire {w} out of range for {}-qubit circuit",
                self.num_qubits
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `H = 1/√2 [[1, 1], [1, -1]]`.
pub fn hadamard_matrix() -> UnitaryMatrix {
    UnitaryMatrix::from_unitary_product(
        2,
        vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
        ],
    )
}

/// `V = diag(1, i)`.
pub fn v_matrix() -> UnitaryMatrix {
    UnitaryMatrix::from_unitary_product(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
}

/// `W = diag(1, e^{iπ/4})`.
pub fn w_matrix() -> UnitaryMatrix {
    UnitaryMatrix::from_unitary_product(
        2,
        vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex64::from_polar(1.0, FRAC_PI_4),
        ],
    )
}

/// `X = [[0, 1], [1, 0]]`.
pub fn x_matrix() -> UnitaryMatrix {
    UnitaryMatrix::from_unitary_product(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

/// 4x4 controlled-`u` in the basis |00⟩,|01⟩,|10⟩,|11⟩ (control is the first
/// qubit).
pub fn controlled_matrix(u: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    if u.dim() != 2 {
        return Err(Error::InvalidInput(
            "controlled gate expects a 2x2 unitary".into(),
        ));
    }
    let mut entries = vec![Complex64::ZERO; 16];
    entries[0] = Complex64::ONE;
    entries[5] = Complex64::ONE;
    for i in 0..2 {
        for j in 0..2 {
            entries[(2 + i) * 4 + (2 + j)] = u.entry(i, j);
        }
    }
    Ok(UnitaryMatrix::from_unitary_product(4, entries))
}

/// 8x8 Toffoli: flips the last qubit iff the first two are 1.
pub fn toffoli_matrix() -> UnitaryMatrix {
    let mut entries = vec![Complex64::ZERO; 64];
    for x in 0..8usize {
        let y = if x >> 1 == 0b11 { x ^ 1 } else { x };
        entries[y * 8 + x] = Complex64::ONE;
    }
    UnitaryMatrix::from_unitary_product(8, entries)
}

/// The exact constant matrix for a fixed (non-oracle) gate kind.
pub fn gate_matrix(kind: &GateKind) -> Result<UnitaryMatrix> {
    match kind {
        GateKind::H => Ok(hadamard_matrix()),
        GateKind::V => Ok(v_matrix()),
        GateKind::Vdg => Ok(v_matrix().adjoint()),
        GateKind::W => Ok(w_matrix()),
        GateKind::Wdg => Ok(w_matrix().adjoint()),
        GateKind::X => Ok(x_matrix()),
        GateKind::Cnot => controlled_matrix(&x_matrix()),
        GateKind::ControlledV => controlled_matrix(&v_matrix()),
        GateKind::ControlledVdg => controlled_matrix(&v_matrix().adjoint()),
        GateKind::ControlledU(u) => controlled_matrix(u),
        GateKind::Toffoli => Ok(toffoli_matrix()),
        GateKind::OracleQuery(id) => Err(Error::InvalidInput(format!(
            "oracle query '{id}' has no fixed matrix; resolve it through the oracle module"
        ))),
    }
}

/// Seven-gate simulation of the Toffoli gate on three qubits, wired exactly as
/// the controlled-V construction: H(2); CV(1→2); CNOT(0→1); CV†(1→2);
/// CNOT(0→1); CV(0→2); H(2). Its unitary equals the 8x8 Toffoli matrix with
/// global phase 1.
pub fn toffoli_decomposition() -> QuantumCircuit {
    let mut circuit = QuantumCircuit::new(3);
    let gates = [
        Gate::new(GateKind::H, vec![2]),
        Gate::new(GateKind::ControlledV, vec![1, 2]),
        Gate::new(GateKind::Cnot, vec![0, 1]),
        Gate::new(GateKind::ControlledVdg, vec![1, 2]),
        Gate::new(GateKind::Cnot, vec![0, 1]),
        Gate::new(GateKind::ControlledV, vec![0, 2]),
        Gate::new(GateKind::H, vec![2]),
    ];
    for g in gates {
        circuit.push(g.expect("fixed wiring")).expect("in range");
    }
    circuit
}

/// Five-gate simulation of controlled-V on two qubits from W and CNOT:
/// W(0); W(1); CNOT(0→1); W†(1); CNOT(0→1). Note `W† = W⁷`.
pub fn controlled_v_decomposition() -> QuantumCircuit {
    let mut circuit = QuantumCircuit::new(2);
    let gates = [
        Gate::new(GateKind::W, vec![0]),
        Gate::new(GateKind::W, vec![1]),
        Gate::new(GateKind::Cnot, vec![0, 1]),
        Gate::new(GateKind::Wdg, vec![1]),
        Gate::new(GateKind::Cnot, vec![0, 1]),
    ];
    for g in gates {
        circuit.push(g.expect("fixed wiring")).expect("in range");
    }
    circuit
}

/// Rewrites a circuit into the {H, W, CNOT} basis by exact expansions only:
/// Toffoli via the seven-gate form, controlled-V via the W/CNOT form,
/// V = W², V† = W⁶, W† = W⁷, and X = H·W⁴·H (W⁴ = Z). The unitary is
/// preserved exactly; arbitrary controlled-U gates are rejected.
pub fn rewrite_to_basis(circuit: &QuantumCircuit) -> Result<QuantumCircuit> {
    let mut out = QuantumCircuit::new(circuit.num_qubits);
    for gate in circuit.gates() {
        expand_gate(gate, &mut out)?;
    }
    Ok(out)
}

fn expand_gate(gate: &Gate, out: &mut QuantumCircuit) -> Result<()> {
    let push = |out: &mut QuantumCircuit, kind: GateKind, wires: Vec<usize>| -> Result<()> {
        out.push(Gate::new(kind, wires)?)
    };
    match &gate.kind {
        GateKind::H | GateKind::W | GateKind::Cnot => {
            out.push(gate.clone())?;
        }
        GateKind::Wdg => {
            for _ in 0..7 {
                push(out, GateKind::W, gate.wires.clone())?;
            }
        }
        GateKind::V => {
            for _ in 0..2 {
                push(out, GateKind::W, gate.wires.clone())?;
            }
        }
        GateKind::Vdg => {
            for _ in 0..6 {
                push(out, GateKind::W, gate.wires.clone())?;
            }
        }
        GateKind::X => {
            // X = H Z H with Z = W^4.
            let q = gate.wires[0];
            push(out, GateKind::H, vec![q])?;
            for _ in 0..4 {
                push(out, GateKind::W, vec![q])?;
            }
            push(out, GateKind::H, vec![q])?;
        }
        GateKind::ControlledV => {
            let (ctl, tgt) = (gate.wires[0], gate.wires[1]);
            for g in controlled_v_gates(ctl, tgt) {
                expand_gate(&g, out)?;
            }
        }
        GateKind::ControlledVdg => {
            // Inverse of the controlled-V expansion: reversed order, each
            // gate inverted.
            let (ctl, tgt) = (gate.wires[0], gate.wires[1]);
            let mut gates = controlled_v_gates(ctl, tgt);
            gates.reverse();
            for g in gates {
                expand_gate(&g.adjoint(), out)?;
            }
        }
        GateKind::Toffoli => {
            let (c0, c1, t) = (gate.wires[0], gate.wires[1], gate.wires[2]);
            let seq = [
                Gate::new(GateKind::H, vec![t])?,
                Gate::new(GateKind::ControlledV, vec![c1, t])?,
                Gate::new(GateKind::Cnot, vec![c0, c1])?,
                Gate::new(GateKind::ControlledVdg, vec![c1, t])?,
                Gate::new(GateKind::Cnot, vec![c0, c1])?,
                Gate::new(GateKind::ControlledV, vec![c0, t])?,
                Gate::new(GateKind::H, vec![t])?,
            ];
            for g in seq {
                expand_gate(&g, out)?;
            }
        }
        GateKind::ControlledU(_) | GateKind::OracleQuery(_) => {
            return Err(Error::UnsupportedGate(gate.kind.name().to_string()));
        }
    }
    Ok(())
}

fn controlled_v_gates(ctl: usize, tgt: usize) -> Vec<Gate> {
    vec![
        Gate::new(GateKind::W, vec![ctl]).expect("fixed wiring"),
        Gate::new(GateKind::W, vec![tgt]).expect("fixed wiring"),
        Gate::new(GateKind::Cnot, vec![ctl, tgt]).expect("fixed wiring"),
        Gate::new(GateKind::Wdg, vec![tgt]).expect("fixed wiring"),
        Gate::new(GateKind::Cnot, vec![ctl, tgt]).expect("fixed wiring"),
    ]
}

/// Parses the circuit text format: a `qubits N` header, then one gate per
/// line as `GATE q0 [q1 [q2]]`; `#` starts a comment.
pub fn parse_circuit_text(text: &str) -> Result<QuantumCircuit> {
    let mut circuit: Option<QuantumCircuit> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().expect("non-empty line");
        if head.eq_ignore_ascii_case("qubits") {
            let n: usize = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing qubit count", lineno + 1)))?
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: bad qubit count: {e}", lineno + 1)))?;
            if circuit.is_some() {
                return Err(Error::Parse(format!(
                    "line {}: duplicate qubits header",
                    lineno + 1
                )));
            }
            circuit = Some(QuantumCircuit::new(n));
            continue;
        }
        let circuit = circuit
            .as_mut()
            .ok_or_else(|| Error::Parse(format!("line {}: gate before qubits header", lineno + 1)))?;
        let kind = match head.to_ascii_uppercase().as_str() {
            "H" => GateKind::H,
            "V" => GateKind::V,
            "VDG" => GateKind::Vdg,
            "W" => GateKind::W,
            "WDG" => GateKind::Wdg,
            "X" | "NOT" => GateKind::X,
            "CNOT" => GateKind::Cnot,
            "CV" => GateKind::ControlledV,
            "CVDG" => GateKind::ControlledVdg,
            "TOFFOLI" | "CCNOT" => GateKind::Toffoli,
            other => return Err(Error::Parse(format!("line {}: unknown gate {other}", lineno + 1))),
        };
        let wires = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("line {}: bad wire index: {e}", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let gate = Gate::new(kind, wires)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        circuit
            .push(gate)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
    }
    circuit.ok_or_else(|| Error::Parse("empty circuit text: missing qubits header".into()))
}

/// Renders a circuit in the text format accepted by [`parse_circuit_text`].
pub fn circuit_to_text(circuit: &QuantumCircuit) -> Result<String> {
    let mut out = format!("qubits {}\n", circuit.num_qubits);
    for gate in circuit.gates() {
        match gate.kind {
            GateKind::ControlledU(_) | GateKind::OracleQuery(_) => {
                return Err(Error::InvalidInput(format!(
                    "gate {} has no text form",
                    gate.kind.name()
                )))
            }
            _ => {}
        }
        out.push_str(&gate.to_string());
        out.push('\n');
    }
    Ok(out)
}
