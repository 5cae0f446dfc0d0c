//! The run-report value every algorithm run serializes to: one JSON object
//! per run, deterministic field order.

use serde::Serialize;

/// Machine-readable record of one algorithm or protocol run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub n: usize,
    pub seed: u64,
    pub trial: usize,
    pub queries: u64,
    pub aux_gate_count: u64,
    /// Algorithm-specific outcome (witness bitstring, mask, factor list, …).
    pub outcome: serde_json::Value,
    pub success: bool,
    /// Seconds; omitted from serialized output by default so identical seeds
    /// produce identical bytes. The CLI re-enables it behind a flag.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
    /// Protocol transcript for communication runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub communication: Option<serde_json::Value>,
}

impl RunReport {
    pub fn new(algorithm: &str, n: usize, seed: u64, trial: usize) -> Self {
        RunReport {
            algorithm: algorithm.to_string(),
            n,
            seed,
            trial,
            queries: 0,
            aux_gate_count: 0,
            outcome: serde_json::Value::Null,
            success: false,
            wall_time: None,
            communication: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Deterministic per-trial seed derivation (splitmix64 over the master seed
/// and trial index), so trials are independent yet reproducible.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_is_stable_and_omits_empty_fields() {
        let mut r = RunReport::new("grover", 10, 7, 0);
        r.queries = 25;
        r.success = true;
        r.outcome = serde_json::json!("0000101010");
        let json = r.to_json();
        assert_eq!(
            json,
            "{\"algorithm\":\"grover\",\"n\":10,\"seed\":7,\"trial\":0,\"queries\":25,\
             \"aux_gate_count\":0,\"outcome\":\"0000101010\",\"success\":true}"
        );
    }

    #[test]
    fn derived_seeds_are_deterministic_and_spread() {
        assert_eq!(derive_seed(0, 0), derive_seed(0, 0));
        let seeds: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut dedup = seeds.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), seeds.len());
    }
}
