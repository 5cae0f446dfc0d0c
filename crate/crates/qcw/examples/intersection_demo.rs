//! Alice and Bob find a common element of their sets with fewer qubits of
//! communication than the n bits the trivial protocol ships.
//!
//! Run with: cargo run --example intersection_demo -p qcw

use qcw::comm::{intersection_protocol, trivial_protocol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> qcw::Result<()> {
    let n = 1024;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // Overlapping subsets of {0, ..., n-1}; with ~30 common elements the
    // search needs only a handful of queries, so the 2(k+3)-qubit shuttles
    // stay well under the n bits the trivial protocol ships. (With a single
    // common element the constants still favor the trivial protocol at this
    // n; the gap is asymptotic.)
    let x: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.18)).collect();
    let y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.18)).collect();

    let (classical, trivial) = trivial_protocol(&x, &y, |a, b| {
        a.iter().zip(b).any(|(&p, &q)| p && q)
    })?;
    println!("trivial protocol: IN = {classical}, {} bits sent", trivial.bits_total);

    let run = intersection_protocol(&x, &y, 0.01, &mut rng)?;
    println!(
        "quantum protocol: IN = {}, witness = {:?}, {} queries, {} qubits + {} bits sent",
        run.found, run.witness, run.queries, run.transcript.qubits_total, run.transcript.bits_total
    );
    if let Some(i) = run.witness {
        assert!(x[i as usize] && y[i as usize]);
        println!("witness {i} verified against both inputs");
    }
    Ok(())
}
