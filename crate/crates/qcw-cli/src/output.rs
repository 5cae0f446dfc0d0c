//! Report rendering: JSON lines (canonical), CSV, and a human table.

use qcw::algorithms::RunReport;
use serde_json::{json, Value};

use crate::config::OutputFormat;

/// Aggregate line over all trial reports: mean queries, success rate, and
/// communication totals when any report carries a transcript.
pub fn aggregate(algorithm: &str, reports: &[RunReport]) -> Value {
    let count = reports.len() as u64;
    let total_queries: u64 = reports.iter().map(|r| r.queries).sum();
    let successes = reports.iter().filter(|r| r.success).count() as u64;
    let mut agg = serde_json::Map::new();
    agg.insert("aggregate".into(), json!(true));
    agg.insert("algorithm".into(), json!(algorithm));
    agg.insert("reports".into(), json!(count));
    agg.insert(
        "mean_queries".into(),
        json!(total_queries as f64 / count.max(1) as f64),
    );
    agg.insert(
        "success_rate".into(),
        json!(successes as f64 / count.max(1) as f64),
    );
    let qubits: u64 = reports
        .iter()
        .filter_map(|r| r.communication.as_ref())
        .filter_map(|c| c.get("qubits_total").and_then(Value::as_u64))
        .sum();
    let bits: u64 = reports
        .iter()
        .filter_map(|r| r.communication.as_ref())
        .filter_map(|c| c.get("bits_total").and_then(Value::as_u64))
        .sum();
    if reports.iter().any(|r| r.communication.is_some()) {
        agg.insert("qubits_total".into(), json!(qubits));
        agg.insert("bits_total".into(), json!(bits));
    }
    Value::Object(agg)
}

pub fn render(reports: &[RunReport], agg: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&r.to_json());
                out.push('\n');
            }
            out.push_str(&serde_json::to_string(agg).expect("aggregate serializes"));
            out.push('\n');
            out
        }
        OutputFormat::Csv => {
            let mut out =
                String::from("algorithm,trial,n,seed,queries,aux_gate_count,success,outcome\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.algorithm,
                    r.trial,
                    r.n,
                    r.seed,
                    r.queries,
                    r.aux_gate_count,
                    r.success,
                    csv_escape(&r.outcome.to_string())
                ));
            }
            out.push_str(&format!(
                "aggregate,,,,,,,{}\n",
                csv_escape(&agg.to_string())
            ));
            out
        }
        OutputFormat::Table => {
            let mut out = format!(
                "{:<12} {:>5} {:>4} {:>8} {:>8} {:>7}  {}\n",
                "algorithm", "trial", "n", "queries", "aux", "ok", "outcome"
            );
            for r in reports {
                out.push_str(&format!(
                    "{:<12} {:>5} {:>4} {:>8} {:>8} {:>7}  {}\n",
                    r.algorithm,
                    r.trial,
                    r.n,
                    r.queries,
                    r.aux_gate_count,
                    r.success,
                    r.outcome
                ));
            }
            out.push_str(&format!("summary: {agg}\n"));
            out
        }
    }
}

fn csv_escape(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}
