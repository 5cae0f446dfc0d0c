//! Exact complex-amplitude simulation of m-qubit registers.
//!
//! Amplitudes are indexed by the big-endian integer value of the basis
//! bitstring: qubit 0 is the leftmost/top wire, so its bit sits at position
//! `m-1` of the index. Gate application updates amplitudes in place with
//! Θ(2^m) work per gate; no 2^m x 2^m matrix is ever materialized. An
//! internal operation counter tracks amplitude reads/writes so tests can
//! assert the sparse-update cost.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::{gate_matrix, GateKind, QuantumCircuit, UnitaryMatrix};

/// Norm deviation tolerated by state constructors and the normalization
/// invariant.
pub const NORM_TOL: f64 = 1e-9;

/// Hard cap on register width: 2^26 amplitudes is 1 GiB of complex doubles.
const MAX_QUBITS: usize = 26;

/// Dense-matrix extraction is capped here; it is a testing aid only.
const MAX_UNITARY_QUBITS: usize = 12;

/// One computational basis label of an `m`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisState {
    pub index: u64,
    pub width: usize,
}

impl BasisState {
    /// Value of qubit `k` (0 = leftmost).
    pub fn bit(&self, k: usize) -> bool {
        debug_assert!(k < self.width);
        (self.index >> (self.width - 1 - k)) & 1 == 1
    }

    pub fn bits(&self) -> String {
        (0..self.width)
            .map(|k| if self.bit(k) { '1' } else { '0' })
            .collect()
    }
}

/// Parses a big-endian bitstring into its amplitude index.
pub fn bits_to_index(bits: &str) -> Result<u64> {
    if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidInput(format!("not a bitstring: {bits:?}")));
    }
    Ok(u64::from_str_radix(bits, 2).expect("validated binary"))
}

/// Outcome of measuring every qubit of a register.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSample {
    /// Measured bitstring, length m.
    pub outcome: String,
    /// The value |α_outcome|² at sampling time.
    pub probability: f64,
}

/// 2^m complex amplitudes of an m-qubit register, norm 1.
#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
    ops: u64,
}

impl StateVector {
    /// |x⟩ for the given basis bitstring.
    pub fn basis_state(num_qubits: usize, bits: &str) -> Result<Self> {
        if bits.len() != num_qubits {
            return Err(Error::InvalidInput(format!(
                "bitstring {bits:?} has length {}, expected {num_qubits}",
                bits.len()
            )));
        }
        let index = bits_to_index(bits)?;
        Self::basis_index(num_qubits, index)
    }

    /// |x⟩ for the given amplitude index.
    pub fn basis_index(num_qubits: usize, index: u64) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidInput("register needs at least one qubit".into()));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap"
            )));
        }
        let len = 1usize << num_qubits;
        if index as usize >= len {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::ZERO; len];
        amps[index as usize] = Complex64::ONE;
        Ok(StateVector { num_qubits, amps, ops: 0 })
    }

    /// |0...0⟩ on `num_qubits` wires.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis_index(num_qubits, 0)
    }

    /// Builds a state from raw amplitudes, enforcing the norm invariant.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        let state = StateVector { num_qubits, amps, ops: 0 };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL}"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitude reads/writes performed by gate applications so far.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    fn qubit_mask(&self, k: usize) -> Result<u64> {
        if k >= self.num_qubits {
            return Err(Error::InvalidInput(format!(
                "qubit index {k} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(1u64 << (self.num_qubits - 1 - k))
    }

    /// Tensor product: `self` supplies the leading (leftmost) qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap"
            )));
        }
        let shift = other.num_qubits;
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == Complex64::ZERO {
                continue;
            }
            for (j, &b) in other.amps.iter().enumerate() {
                amps[(i << shift) | j] = a * b;
            }
        }
        Ok(StateVector { num_qubits, amps, ops: 0 })
    }

    /// Applies a one-qubit unitary to qubit `k`, touching each amplitude a
    /// constant number of times.
    pub fn apply_one_qubit(&mut self, u: &UnitaryMatrix, k: usize) -> Result<()> {
        if u.dim() != 2 {
            return Err(Error::InvalidInput(format!(
                "one-qubit gate needs a 2x2 matrix, got {}x{}",
                u.dim(),
                u.dim()
            )));
        }
        let mask = self.qubit_mask(k)?;
        let (u00, u01, u10, u11) = (u.entry(0, 0), u.entry(0, 1), u.entry(1, 0), u.entry(1, 1));
        let len = self.amps.len() as u64;
        for i in 0..len {
            if i & mask != 0 {
                continue;
            }
            let j = i | mask;
            let a = self.amps[i as usize];
            let b = self.amps[j as usize];
            self.amps[i as usize] = u00 * a + u01 * b;
            self.amps[j as usize] = u10 * a + u11 * b;
            self.ops += 4;
        }
        Ok(())
    }

    /// Applies `u` to `target` on the subspace where `control` is 1.
    pub fn apply_controlled(&mut self, u: &UnitaryMatrix, control: usize, target: usize) -> Result<()> {
        if control == target {
            return Err(Error::InvalidInput(format!(
                "control and target coincide at qubit {control}"
            )));
        }
        if u.dim() != 2 {
            return Err(Error::InvalidInput(format!(
                "controlled gate needs a 2x2 matrix, got {}x{}",
                u.dim(),
                u.dim()
            )));
        }
        let cmask = self.qubit_mask(control)?;
        let tmask = self.qubit_mask(target)?;
        let (u00, u01, u10, u11) = (u.entry(0, 0), u.entry(0, 1), u.entry(1, 0), u.entry(1, 1));
        let len = self.amps.len() as u64;
        for i in 0..len {
            if i & cmask == 0 || i & tmask != 0 {
                continue;
            }
            let j = i | tmask;
            let a = self.amps[i as usize];
            let b = self.amps[j as usize];
            self.amps[i as usize] = u00 * a + u01 * b;
            self.amps[j as usize] = u10 * a + u11 * b;
            self.ops += 4;
        }
        Ok(())
    }

    /// Flips `target` where both controls are 1.
    pub fn apply_toffoli(&mut self, c0: usize, c1: usize, target: usize) -> Result<()> {
        if c0 == c1 || c0 == target || c1 == target {
            return Err(Error::InvalidInput("toffoli wires must be distinct".into()));
        }
        let m0 = self.qubit_mask(c0)?;
        let m1 = self.qubit_mask(c1)?;
        let mt = self.qubit_mask(target)?;
        let len = self.amps.len() as u64;
        for i in 0..len {
            if i & m0 != 0 && i & m1 != 0 && i & mt == 0 {
                self.amps.swap(i as usize, (i | mt) as usize);
                self.ops += 2;
            }
        }
        Ok(())
    }

    /// Permutes basis states by an explicit truth table over all 2^m indices.
    /// The table is verified to be a bijection.
    pub fn apply_permutation(&mut self, table: &[u64]) -> Result<()> {
        let len = self.amps.len();
        if table.len() != len {
            return Err(Error::InvalidInput(format!(
                "permutation table has {} entries, expected {len}",
                table.len()
            )));
        }
        let mut seen = vec![false; len];
        for &t in table {
            let t = t as usize;
            if t >= len || seen[t] {
                return Err(Error::InvalidInput(
                    "permutation table is not a bijection".into(),
                ));
            }
            seen[t] = true;
        }
        self.permute_unchecked(|x| table[x as usize]);
        Ok(())
    }

    /// Permutation by callable; the caller guarantees bijectivity (used for
    /// reversible queries, which are involutions by construction).
    pub(crate) fn permute_unchecked(&mut self, pi: impl Fn(u64) -> u64) {
        let mut out = vec![Complex64::ZERO; self.amps.len()];
        for (x, &a) in self.amps.iter().enumerate() {
            out[pi(x as u64) as usize] = a;
            self.ops += 2;
        }
        self.amps = out;
    }

    /// Multiplies the amplitude of every basis state satisfying `pred` by -1.
    /// This is the diagonal reflection used by Grover's diffusion step.
    pub fn phase_flip(&mut self, pred: impl Fn(BasisState) -> bool) {
        let width = self.num_qubits;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if pred(BasisState { index: i as u64, width }) {
                *a = -*a;
            }
            self.ops += 1;
        }
    }

    /// Applies a fixed-kind gate from the gate module.
    pub fn apply_gate(&mut self, gate: &crate::gates::Gate) -> Result<()> {
        match &gate.kind {
            GateKind::H | GateKind::V | GateKind::Vdg | GateKind::W | GateKind::Wdg | GateKind::X => {
                let m = gate_matrix(&gate.kind)?;
                self.apply_one_qubit(&m, gate.wires[0])
            }
            GateKind::Cnot => {
                let x = gate_matrix(&GateKind::X)?;
                self.apply_controlled(&x, gate.wires[0], gate.wires[1])
            }
            GateKind::ControlledV => {
                let v = gate_matrix(&GateKind::V)?;
                self.apply_controlled(&v, gate.wires[0], gate.wires[1])
            }
            GateKind::ControlledVdg => {
                let v = gate_matrix(&GateKind::Vdg)?;
                self.apply_controlled(&v, gate.wires[0], gate.wires[1])
            }
            GateKind::ControlledU(u) => self.apply_controlled(u, gate.wires[0], gate.wires[1]),
            GateKind::Toffoli => self.apply_toffoli(gate.wires[0], gate.wires[1], gate.wires[2]),
            GateKind::OracleQuery(id) => Err(Error::InvalidInput(format!(
                "oracle query '{id}' must be applied through the oracle module"
            ))),
        }
    }

    pub fn apply_circuit(&mut self, circuit: &QuantumCircuit) -> Result<()> {
        if circuit.num_qubits != self.num_qubits {
            return Err(Error::InvalidInput(format!(
                "circuit is on {} qubits, state has {}",
                circuit.num_qubits, self.num_qubits
            )));
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Σ |α_x|² over basis states satisfying the predicate.
    pub fn probability_of(&self, pred: impl Fn(BasisState) -> bool) -> f64 {
        let width = self.num_qubits;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(BasisState { index: *i as u64, width }))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Samples one basis index with probability |α_x|² without consuming the
    /// state (shot loops clone nothing this way).
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, f64) {
        let r: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last = 0usize;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last = i;
            }
            acc += p;
            if r < acc {
                return (i as u64, p);
            }
        }
        // Rounding pushed the cumulative sum below r; return the last
        // non-zero outcome.
        (last as u64, self.amps[last].norm_sqr())
    }

    /// Measures every qubit, consuming the state.
    pub fn measure_all<R: Rng + ?Sized>(self, rng: &mut R) -> MeasurementSample {
        let (index, probability) = self.sample_index(rng);
        MeasurementSample {
            outcome: BasisState { index, width: self.num_qubits }.bits(),
            probability,
        }
    }
}

/// Dense 2^m x 2^m matrix of a circuit, built column-by-column by applying
/// the circuit to each basis state. Testing aid; capped at 12 qubits.
pub fn circuit_unitary(circuit: &QuantumCircuit) -> Result<UnitaryMatrix> {
    let m = circuit.num_qubits;
    if m == 0 {
        return Err(Error::InvalidInput("circuit has no qubits".into()));
    }
    if m > MAX_UNITARY_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "dense unitary on {m} qubits exceeds the {MAX_UNITARY_QUBITS}-qubit cap"
        )));
    }
    let dim = 1usize << m;
    let mut entries = vec![Complex64::ZERO; dim * dim];
    for col in 0..dim {
        let mut state = StateVector::basis_index(m, col as u64)?;
        state.apply_circuit(circuit)?;
        for (row, &a) in state.amplitudes().iter().enumerate() {
            entries[row * dim + col] = a;
        }
    }
    Ok(UnitaryMatrix::from_unitary_product(dim, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{
        controlled_matrix, controlled_v_decomposition, gate_matrix, hadamard_matrix,
        toffoli_decomposition, toffoli_matrix, Gate, GateKind, QuantumCircuit,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn minus_state() -> StateVector {
        // (|0⟩ - |1⟩)/√2
        StateVector::from_amplitudes(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn basis_state_places_single_amplitude() {
        let s = StateVector::basis_state(1, "0").unwrap();
        assert_eq!(s.amplitude(0), Complex64::ONE);
        assert_eq!(s.amplitude(1), Complex64::ZERO);

        let s = StateVector::basis_state(2, "10").unwrap();
        assert_eq!(s.amplitude(2), Complex64::ONE);
        assert_eq!(s.probability_of(|b| b.index == 2), 1.0);

        let s = StateVector::basis_state(3, "111").unwrap();
        assert_eq!(s.amplitude(7), Complex64::ONE);
    }

    #[test]
    fn basis_state_rejects_length_mismatch() {
        assert!(StateVector::basis_state(2, "101").is_err());
        assert!(StateVector::basis_state(2, "0x").is_err());
    }

    #[test]
    fn tensor_of_minus_states_matches_paper_expansion() {
        // (|0⟩-|1⟩)/√2 ⊗ (|0⟩-|1⟩)/√2 = ½(|00⟩ - |01⟩ - |10⟩ + |11⟩)
        let t = minus_state().tensor(&minus_state()).unwrap();
        let expect = [0.5, -0.5, -0.5, 0.5];
        for (i, &e) in expect.iter().enumerate() {
            assert!((t.amplitude(i as u64) - Complex64::new(e, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn tensor_concatenates_basis_states() {
        let a = StateVector::basis_state(1, "0").unwrap();
        let b = StateVector::basis_state(1, "1").unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.amplitude(0b01), Complex64::ONE);
    }

    #[test]
    fn tensor_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_state(3, &mut rng);
            let b = random_state(2, &mut rng);
            let t = a.tensor(&b).unwrap();
            assert!((t.norm() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn hadamard_on_zero_gives_plus() {
        let mut s = StateVector::basis_state(1, "0").unwrap();
        s.apply_one_qubit(&hadamard_matrix(), 0).unwrap();
        assert!((s.amplitude(0) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() <= 1e-12);
        assert!((s.amplitude(1) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn hadamard_on_second_qubit_reproduces_block_matrix() {
        // The displayed 4x4 form: H acting on qubit 1 of a 2-qubit register.
        let mut circ = QuantumCircuit::new(2);
        circ.push(Gate::new(GateKind::H, vec![1]).unwrap()).unwrap();
        let u = circuit_unitary(&circ).unwrap();
        let r = FRAC_1_SQRT_2;
        let expect = [
            [r, r, 0.0, 0.0],
            [r, -r, 0.0, 0.0],
            [0.0, 0.0, r, r],
            [0.0, 0.0, r, -r],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((u.entry(i, j) - Complex64::new(expect[i][j], 0.0)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn identity_gate_leaves_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = random_state(3, &mut rng);
        let before = s.amplitudes().to_vec();
        s.apply_one_qubit(&UnitaryMatrix::identity(2), 1).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.iter()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn one_qubit_gate_rejects_bad_index() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.apply_one_qubit(&hadamard_matrix(), 2).is_err());
    }

    #[test]
    fn cnot_kicks_phase_back_to_control() {
        // CNOT on (|0⟩-|1⟩)(|0⟩-|1⟩)/2 = (|0⟩+|1⟩)(|0⟩-|1⟩)/2.
        let mut s = minus_state().tensor(&minus_state()).unwrap();
        let x = gate_matrix(&GateKind::X).unwrap();
        s.apply_controlled(&x, 0, 1).unwrap();
        let h = 0.5;
        let expect = [h, -h, h, -h];
        for (i, &e) in expect.iter().enumerate() {
            assert!((s.amplitude(i as u64) - Complex64::new(e, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn cnot_flips_target_on_basis_states() {
        let mut s = StateVector::basis_state(2, "10").unwrap();
        let x = gate_matrix(&GateKind::X).unwrap();
        s.apply_controlled(&x, 0, 1).unwrap();
        assert_eq!(s.probability_of(|b| b.bits() == "11"), 1.0);
    }

    #[test]
    fn control_zero_subspace_is_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_one_qubit_unitary(&mut rng);
        for y in ["00", "01"] {
            let mut s = StateVector::basis_state(2, y).unwrap();
            s.apply_controlled(&u, 0, 1).unwrap();
            assert!((s.probability_of(|b| b.bits() == y) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn controlled_gate_rejects_equal_wires() {
        let mut s = StateVector::zero(2).unwrap();
        let x = gate_matrix(&GateKind::X).unwrap();
        assert!(s.apply_controlled(&x, 1, 1).is_err());
    }

    #[test]
    fn identity_permutation_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = random_state(3, &mut rng);
        let before = s.amplitudes().to_vec();
        let table: Vec<u64> = (0..8).collect();
        s.apply_permutation(&table).unwrap();
        assert_eq!(s.amplitudes(), &before[..]);
    }

    #[test]
    fn cnot_truth_table_as_permutation() {
        // CNOT on |11⟩ → |10⟩ with table over two qubits (control = qubit 0).
        let table = vec![0, 1, 3, 2];
        let mut s = StateVector::basis_state(2, "11").unwrap();
        s.apply_permutation(&table).unwrap();
        assert_eq!(s.probability_of(|b| b.bits() == "10"), 1.0);
    }

    #[test]
    fn reversible_query_permutation_is_self_inverse() {
        // (x,y) -> (x, y ⊕ f(x)) applied twice is the identity.
        let f = |x: u64| (x == 2) as u64; // f over 2 bits, one marked point
        let table: Vec<u64> = (0..8u64).map(|z| (z & !1) | ((z & 1) ^ f(z >> 1))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut s = random_state(3, &mut rng);
        let before = s.amplitudes().to_vec();
        s.apply_permutation(&table).unwrap();
        s.apply_permutation(&table).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.iter()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.apply_permutation(&[0, 0, 1, 2]).is_err());
        assert!(s.apply_permutation(&[0, 1, 2]).is_err());
    }

    #[test]
    fn measuring_basis_state_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = StateVector::basis_state(2, "01").unwrap();
        let sample = s.measure_all(&mut rng);
        assert_eq!(sample.outcome, "01");
        assert!((sample.probability - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sampling_plus_state_matches_born_rule() {
        let mut s = StateVector::basis_state(1, "0").unwrap();
        s.apply_one_qubit(&hadamard_matrix(), 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let shots = 100_000;
        let mut zeros = 0u32;
        for _ in 0..shots {
            let (idx, _) = s.sample_index(&mut rng);
            if idx == 0 {
                zeros += 1;
            }
        }
        let freq = f64::from(zeros) / f64::from(shots);
        assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn sampling_two_qubit_superposition_is_uniform() {
        let s = minus_state().tensor(&minus_state()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let shots = 40_000;
        let mut counts = [0u32; 4];
        for _ in 0..shots {
            let (idx, p) = s.sample_index(&mut rng);
            assert!((p - 0.25).abs() <= 1e-12);
            counts[idx as usize] += 1;
        }
        for &count in &counts {
            let freq = f64::from(count) / f64::from(shots);
            assert!((freq - 0.25).abs() <= 0.02, "frequency {freq}");
        }
    }

    #[test]
    fn probability_of_covers_trivial_and_marginal_cases() {
        let s = StateVector::basis_state(2, "01").unwrap();
        assert!((s.probability_of(|_| true) - 1.0).abs() <= 1e-12);
        assert!((s.probability_of(|b| b.bits() == "01") - 1.0).abs() <= 1e-12);

        // Uniform two-qubit state: P(first bit = 0) = 0.5.
        let mut u = StateVector::zero(2).unwrap();
        u.apply_one_qubit(&hadamard_matrix(), 0).unwrap();
        u.apply_one_qubit(&hadamard_matrix(), 1).unwrap();
        assert!((u.probability_of(|b| !b.bit(0)) - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn empty_circuit_unitary_is_identity() {
        let circ = QuantumCircuit::new(1);
        let u = circuit_unitary(&circ).unwrap();
        assert!(u.max_abs_diff(&UnitaryMatrix::identity(2)) <= 1e-15);
    }

    #[test]
    fn single_gate_unitaries_match_constants() {
        let mut circ = QuantumCircuit::new(1);
        circ.push(Gate::new(GateKind::H, vec![0]).unwrap()).unwrap();
        assert!(circuit_unitary(&circ).unwrap().max_abs_diff(&hadamard_matrix()) <= 1e-12);

        let mut circ = QuantumCircuit::new(2);
        circ.push(Gate::new(GateKind::Cnot, vec![0, 1]).unwrap()).unwrap();
        let cnot = gate_matrix(&GateKind::Cnot).unwrap();
        assert!(circuit_unitary(&circ).unwrap().max_abs_diff(&cnot) <= 1e-12);
    }

    #[test]
    fn circuit_unitary_rejects_large_registers() {
        let circ = QuantumCircuit::new(13);
        assert!(matches!(circuit_unitary(&circ), Err(Error::ResourceLimit(_))));
    }

    // Decomposition identities (exact, global phase 1).

    #[test]
    fn toffoli_decomposition_truth_table() {
        let circ = toffoli_decomposition();
        for x in 0..8u64 {
            let mut s = StateVector::basis_index(3, x).unwrap();
            s.apply_circuit(&circ).unwrap();
            let expect = if x >> 1 == 0b11 { x ^ 1 } else { x };
            assert!(
                (s.probability_of(|b| b.index == expect) - 1.0).abs() <= 1e-12,
                "basis {x} mapped wrong"
            );
        }
        // |110⟩ → |111⟩ specifically.
        let mut s = StateVector::basis_state(3, "110").unwrap();
        s.apply_circuit(&circ).unwrap();
        assert!((s.amplitude(0b111).re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn toffoli_decomposition_matrix_is_exact() {
        let u = circuit_unitary(&toffoli_decomposition()).unwrap();
        // Entrywise equality with no phase correction.
        assert!(u.max_abs_diff(&toffoli_matrix()) <= 1e-9);
    }

    #[test]
    fn controlled_v_decomposition_matrix_is_exact() {
        let u = circuit_unitary(&controlled_v_decomposition()).unwrap();
        let cv = controlled_matrix(&gate_matrix(&GateKind::V).unwrap()).unwrap();
        assert!(u.max_abs_diff(&cv) <= 1e-9);

        // |11⟩ gains phase i; all other basis states are fixed.
        let mut s = StateVector::basis_state(2, "11").unwrap();
        s.apply_circuit(&controlled_v_decomposition()).unwrap();
        assert!((s.amplitude(3) - Complex64::new(0.0, 1.0)).norm() <= 1e-12);
        for bits in ["00", "01", "10"] {
            let mut s = StateVector::basis_state(2, bits).unwrap();
            s.apply_circuit(&controlled_v_decomposition()).unwrap();
            let idx = bits_to_index(bits).unwrap();
            assert!((s.amplitude(idx) - Complex64::ONE).norm() <= 1e-12);
        }
    }

    #[test]
    fn rewrite_preserves_unitary_on_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let circ = random_supported_circuit(3, 8, &mut rng);
            let rewritten = crate::gates::rewrite_to_basis(&circ).unwrap();
            let a = circuit_unitary(&circ).unwrap();
            let b = circuit_unitary(&rewritten).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-8);
        }
    }

    #[test]
    fn sparse_update_touches_theta_2m_amplitudes() {
        let m = 12;
        let mut s = StateVector::zero(m).unwrap();
        let full = 1u64 << m;
        let before = s.op_count();
        s.apply_one_qubit(&hadamard_matrix(), 3).unwrap();
        let one_qubit = s.op_count() - before;
        assert!(one_qubit >= full / 2 && one_qubit <= 4 * full, "{one_qubit}");

        let before = s.op_count();
        let x = gate_matrix(&GateKind::X).unwrap();
        s.apply_controlled(&x, 0, 5).unwrap();
        let controlled = s.op_count() - before;
        assert!(controlled >= full / 4 && controlled <= 4 * full, "{controlled}");
    }

    #[test]
    fn gate_then_adjoint_restores_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let gates = random_gate_sequence(5, 20, &mut rng);
        for gate in gates {
            let mut s = random_state(5, &mut rng);
            let before = s.amplitudes().to_vec();
            s.apply_gate(&gate).unwrap();
            s.apply_gate(&gate.adjoint()).unwrap();
            for (a, b) in s.amplitudes().iter().zip(before.iter()) {
                assert!((a - b).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn norm_preserved_over_100_random_gates_on_12_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut s = StateVector::zero(12).unwrap();
        for gate in random_gate_sequence(12, 100, &mut rng) {
            s.apply_gate(&gate).unwrap();
        }
        assert!((s.norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn gate_application_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for gate in random_gate_sequence(4, 10, &mut rng) {
            let s1 = random_state(4, &mut rng);
            let s2 = random_state(4, &mut rng);
            let alpha = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let beta = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let combo: Vec<Complex64> = s1
                .amplitudes()
                .iter()
                .zip(s2.amplitudes())
                .map(|(a, b)| alpha * a + beta * b)
                .collect();
            let norm = combo.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            let normalized: Vec<Complex64> = combo.iter().map(|a| a / norm).collect();
            let mut lhs = StateVector::from_amplitudes(normalized).unwrap();
            lhs.apply_gate(&gate).unwrap();

            let mut t1 = s1.clone();
            let mut t2 = s2.clone();
            t1.apply_gate(&gate).unwrap();
            t2.apply_gate(&gate).unwrap();
            for ((l, a), b) in lhs.amplitudes().iter().zip(t1.amplitudes()).zip(t2.amplitudes()) {
                let rhs = (alpha * a + beta * b) / norm;
                assert!((l - rhs).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn born_rule_frequencies_match_probability_of() {
        // 3-sigma binomial agreement between sampling and analytic values.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut s = random_state(3, &mut rng);
        let circ = {
            let mut c = QuantumCircuit::new(3);
            c.push(Gate::new(GateKind::H, vec![0]).unwrap()).unwrap();
            c.push(Gate::new(GateKind::Cnot, vec![0, 2]).unwrap()).unwrap();
            c.push(Gate::new(GateKind::W, vec![1]).unwrap()).unwrap();
            c
        };
        s.apply_circuit(&circ).unwrap();
        let shots = 50_000u32;
        let mut counts = [0u32; 8];
        for _ in 0..shots {
            let (idx, _) = s.sample_index(&mut rng);
            counts[idx as usize] += 1;
        }
        for idx in 0..8u64 {
            let p = s.probability_of(|b| b.index == idx);
            let mean = f64::from(shots) * p;
            let sigma = (f64::from(shots) * p * (1.0 - p)).sqrt();
            let observed = f64::from(counts[idx as usize]);
            assert!(
                (observed - mean).abs() <= 3.0 * sigma + 1.0,
                "outcome {idx}: observed {observed}, expected {mean} ± {sigma}"
            );
        }
    }

    // Test helpers.

    pub(crate) fn random_state<R: Rng>(m: usize, rng: &mut R) -> StateVector {
        let len = 1usize << m;
        let mut amps: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(amps).unwrap()
    }

    fn random_one_qubit_unitary<R: Rng>(rng: &mut R) -> UnitaryMatrix {
        // u3-style parametrization keeps the matrix exactly unitary.
        let theta = rng.gen::<f64>() * std::f64::consts::PI;
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        let lam = rng.gen::<f64>() * std::f64::consts::TAU;
        let (c2, s2) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        UnitaryMatrix::new(
            2,
            vec![
                Complex64::new(c2, 0.0),
                -Complex64::from_polar(s2, lam),
                Complex64::from_polar(s2, phi),
                Complex64::from_polar(c2, phi + lam),
            ],
        )
        .unwrap()
    }

    fn random_gate_sequence<R: Rng>(m: usize, count: usize, rng: &mut R) -> Vec<Gate> {
        (0..count)
            .map(|_| {
                let q = rng.gen_range(0..m);
                match rng.gen_range(0..5) {
                    0 => Gate::new(GateKind::H, vec![q]).unwrap(),
                    1 => Gate::new(GateKind::V, vec![q]).unwrap(),
                    2 => Gate::new(GateKind::W, vec![q]).unwrap(),
                    3 => {
                        let mut t = rng.gen_range(0..m);
                        while t == q {
                            t = rng.gen_range(0..m);
                        }
                        Gate::new(GateKind::Cnot, vec![q, t]).unwrap()
                    }
                    _ => {
                        let mut t = rng.gen_range(0..m);
                        while t == q {
                            t = rng.gen_range(0..m);
                        }
                        Gate::new(
                            GateKind::ControlledU(random_one_qubit_unitary(rng)),
                            vec![q, t],
                        )
                        .unwrap()
                    }
                }
            })
            .collect()
    }

    fn random_supported_circuit<R: Rng>(m: usize, count: usize, rng: &mut R) -> QuantumCircuit {
        let mut circ = QuantumCircuit::new(m);
        for _ in 0..count {
            let q = rng.gen_range(0..m);
            let gate = match rng.gen_range(0..8) {
                0 => Gate::new(GateKind::H, vec![q]).unwrap(),
                1 => Gate::new(GateKind::V, vec![q]).unwrap(),
                2 => Gate::new(GateKind::Vdg, vec![q]).unwrap(),
                3 => Gate::new(GateKind::W, vec![q]).unwrap(),
                4 => Gate::new(GateKind::X, vec![q]).unwrap(),
                5 | 6 => {
                    let mut t = rng.gen_range(0..m);
                    while t == q {
                        t = rng.gen_range(0..m);
                    }
                    if rng.gen_bool(0.5) {
                        Gate::new(GateKind::Cnot, vec![q, t]).unwrap()
                    } else {
                        Gate::new(GateKind::ControlledV, vec![q, t]).unwrap()
                    }
                }
                _ => {
                    let mut wires = vec![q];
                    while wires.len() < 3 {
                        let w = rng.gen_range(0..m);
                        if !wires.contains(&w) {
                            wires.push(w);
                        }
                    }
                    Gate::new(GateKind::Toffoli, wires).unwrap()
                }
            };
            circ.push(gate).unwrap();
        }
        circ
    }
}
