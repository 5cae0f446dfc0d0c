//! Quantum complexity workbench.
//!
//! Exact complex-amplitude simulation of small qubit registers, together with
//! the machinery built on top of it:
//!
//! - [`statevector`]: state construction, gate application, measurement.
//! - [`gates`]: the concrete gate constants and exact circuit decompositions
//!   (Toffoli from controlled-V, controlled-V from W and CNOT).
//! - [`boolcircuit`]: classical boolean circuit DAGs, their bitstring
//!   encoding, brute-force satisfiability, and Solovay–Strassen primality.
//! - [`oracle`]: reversible query gates, query counting, and compilation of
//!   boolean circuits into ancilla-clean reversible oracles.
//! - [`algorithms`]: Deutsch, Simon, Grover search/OR/AND, circuit-SAT via
//!   Grover, parity, order finding and the order-to-factoring reduction.
//! - [`comm`]: a two-party protocol engine with explicit qubit/bit accounting,
//!   the fingerprint equality protocol, the distributed query gadget, and the
//!   query-to-communication compiler.
//!
//! Everything randomized takes an explicit seeded RNG; identical seeds give
//! identical runs.

pub mod algorithms;
pub mod boolcircuit;
pub mod comm;
pub mod error;
pub mod gates;
pub mod numtheory;
pub mod oracle;
pub mod statevector;

pub use comm::{BitstringOracle, DistributedState, Party, ProtocolTranscript};
pub use error::{Error, Result};
pub use gates::{Gate, GateKind, QuantumCircuit, UnitaryMatrix};
pub use oracle::{OracleFunction, QueryCounter, ReversibleQuery};
pub use statevector::{MeasurementSample, StateVector};
