//! The parity problem in the query model: PARITY(f) = (Σ_x f(x)) mod 2.
//!
//! Classically this takes all 2^n queries; the brute-force baseline here is
//! the reference cost the communication-compiler example measures against.

use crate::algorithms::backend::{QueryAlgorithm, QueryAlgorithmOutput, QueryBackend};
use crate::error::{Error, Result};
use crate::oracle::{OracleFunction, QueryCounter, ReversibleQuery};

const MAX_PARITY_BITS: usize = 20;

/// Queries every point once; the counter lands at exactly 2^n.
pub fn parity_brute(oracle: &OracleFunction, counter: &mut QueryCounter) -> Result<bool> {
    if oracle.out_bits() != 1 {
        return Err(Error::InvalidInput("parity takes a boolean oracle".into()));
    }
    let n = oracle.in_bits();
    if n > MAX_PARITY_BITS {
        return Err(Error::ResourceLimit(format!(
            "parity over {n} bits exceeds the {MAX_PARITY_BITS}-bit cap"
        )));
    }
    let query = ReversibleQuery::new(oracle.clone());
    let mut acc = 0u64;
    for x in 0..1u64 << n {
        let (_, y) = query.classical(x, 0, counter)?;
        acc ^= y;
    }
    Ok(acc == 1)
}

/// The same scan against a counted backend, so it can be compiled into a
/// communication protocol.
pub struct ParityBruteAlgorithm;

impl QueryAlgorithm for ParityBruteAlgorithm {
    fn name(&self) -> &'static str {
        "parity-brute"
    }

    fn run(
        &self,
        backend: &mut dyn QueryBackend,
        _eps: f64,
        _rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Result<QueryAlgorithmOutput> {
        let n = backend.index_bits();
        if n > MAX_PARITY_BITS {
            return Err(Error::ResourceLimit(format!(
                "parity over {n} bits exceeds the {MAX_PARITY_BITS}-bit cap"
            )));
        }
        let mut acc = false;
        for x in 0..1u64 << n {
            acc ^= backend.classical_query(x)?;
        }
        Ok(QueryAlgorithmOutput {
            bit: acc,
            witness: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_zero_has_even_parity_and_full_count() {
        let oracle = OracleFunction::from_table(5, 1, vec![0; 32]).unwrap();
        let mut counter = QueryCounter::new();
        assert!(!parity_brute(&oracle, &mut counter).unwrap());
        assert_eq!(counter.count(), 32);
    }

    #[test]
    fn single_indicator_has_odd_parity() {
        let oracle = OracleFunction::indicator(4, &[9]).unwrap();
        let mut counter = QueryCounter::new();
        assert!(parity_brute(&oracle, &mut counter).unwrap());
        assert_eq!(counter.count(), 16);
    }

    #[test]
    fn random_oracles_match_popcount() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            let oracle = OracleFunction::random_boolean(8, &mut rng);
            let popcount: u64 = (0..256u64).map(|x| oracle.eval(x)).sum();
            let mut counter = QueryCounter::new();
            let got = parity_brute(&oracle, &mut counter).unwrap();
            assert_eq!(got, popcount % 2 == 1);
        }
    }
}
