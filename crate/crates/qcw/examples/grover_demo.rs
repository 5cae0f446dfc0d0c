//! Sweep Grover iterations on a single marked item and print how the
//! success probability oscillates, next to the closed-form prediction.
//!
//! Run with: cargo run --example grover_demo -p qcw

use qcw::algorithms::grover::rotation_success_probability;
use qcw::algorithms::{grover_search, LocalBackend, QueryBackend};
use qcw::oracle::OracleFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qcw::Result<()> {
    let n = 10;
    let marked = 42u64;
    let oracle = OracleFunction::indicator(n, &[marked])?;

    println!("iter  simulated  closed-form");
    let mut backend = LocalBackend::new(oracle.clone())?;
    backend.reset()?;
    backend.hadamard_index()?;
    for iter in 0..=40u64 {
        let p = backend.index_probability(&|i| i == marked);
        println!("{iter:>4}  {p:>9.6}  {:>11.6}", rotation_success_probability(n, 1, iter));
        backend.oracle_query()?;
        backend.hadamard_index()?;
        backend.reflect_about_zero()?;
        backend.hadamard_index()?;
    }

    // And a full search run with the doubling schedule.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let run = grover_search(&oracle, None, 0.01, &mut rng)?;
    println!(
        "\nsearch: found {:?} in {} queries (success: {})",
        run.outcome, run.queries, run.success
    );
    Ok(())
}
