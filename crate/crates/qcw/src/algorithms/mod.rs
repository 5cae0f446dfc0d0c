//! Query-model algorithms and reductions: Deutsch (exact, one query) and its
//! classical counterparts, Simon, Grover search with its OR/AND variants and
//! the two-level alternation, circuit satisfiability through the oracle
//! compiler, the brute-force parity baseline, and order finding with the
//! order-to-factoring reduction.

pub mod backend;
pub mod deutsch;
pub mod grover;
pub mod order;
pub mod parity;
pub mod report;
pub mod sat;
pub mod simon;

pub use backend::{LocalBackend, QueryAlgorithm, QueryAlgorithmOutput, QueryBackend};
pub use deutsch::{
    classical_deutsch_impossibility, classical_deutsch_two_query, deutsch, DeutschInstance,
    DeutschOutcome, ImpossibilityReport,
};
pub use grover::{
    grover_and, grover_fixed_iteration_probability, grover_or, grover_search,
    grover_search_with_backend, iterations_for_known_count, nested_or_and,
    rotation_success_probability, GroverOrAlgorithm, GroverRun, NestedRun,
};
pub use order::{brute_force_order, factor_from_order, OrderResult, OrderSource};
pub use parity::{parity_brute, ParityBruteAlgorithm};
pub use report::{derive_seed, RunReport};
pub use sat::{quantum_sat, SatRun};
pub use simon::{simon, verify_mask, SimonInstance, SimonOutcome};
