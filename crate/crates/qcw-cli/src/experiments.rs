//! The experiment registry: every algorithm and protocol behind a common
//! trait, registered by name and selected by the CLI subcommand.

use std::collections::BTreeMap;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qcw::algorithms::{
    brute_force_order, classical_deutsch_impossibility, classical_deutsch_two_query, deutsch,
    derive_seed, factor_from_order, grover_search, nested_or_and, parity_brute, quantum_sat,
    DeutschInstance, RunReport, SimonInstance,
};
use qcw::boolcircuit::{self, brute_force_sat, input_to_bits};
use qcw::comm::{eq_fingerprint, fp_rounds_for_eps, intersection_protocol, ip_parity_identity, TranscriptJson};
use qcw::gates::parse_circuit_text;
use qcw::oracle::{parse_truth_table, OracleFunction, QueryCounter};
use qcw::statevector::StateVector;

use crate::config::{CliError, RunConfig};

/// One runnable experiment.
pub trait Experiment {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;

    /// Runs one trial and returns its reports (usually one; `deutsch` emits
    /// one per instance).
    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError>;
}

/// Name-keyed registry; iteration order is the stable listing order.
pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> {
        self.entries.values().map(|b| b.as_ref())
    }
}

/// Builds the full registry.
pub fn registry() -> Registry {
    let mut entries: BTreeMap<&'static str, Box<dyn Experiment>> = BTreeMap::new();
    let all: Vec<Box<dyn Experiment>> = vec![
        Box::new(DeutschExperiment),
        Box::new(SimonExperiment),
        Box::new(GroverExperiment),
        Box::new(SatExperiment),
        Box::new(OrAndExperiment),
        Box::new(ParityExperiment),
        Box::new(OrderExperiment),
        Box::new(FactorExperiment),
        Box::new(EqExperiment),
        Box::new(IntersectExperiment),
        Box::new(IpCheckExperiment),
        Box::new(SimulateExperiment),
    ];
    for exp in all {
        entries.insert(exp.name(), exp);
    }
    Registry { entries }
}

fn trial_rng(cfg: &RunConfig, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, trial as u64))
}

fn mask_to_bits(mask: u64, n: usize) -> String {
    input_to_bits(mask, n)
}

// --- deutsch ---------------------------------------------------------------

struct DeutschExperiment;

impl Experiment for DeutschExperiment {
    fn name(&self) -> &'static str {
        "deutsch"
    }

    fn about(&self) -> &'static str {
        "One-query quantum circuit for Deutsch's problem on all four instances"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let mut rng = trial_rng(cfg, trial);
        let impossibility = classical_deutsch_impossibility();
        let mut reports = Vec::with_capacity(4);
        for inst in DeutschInstance::all() {
            let mut counter = QueryCounter::new();
            let out = deutsch(&inst.oracle(), &mut counter, &mut rng)?;
            let mut classical_counter = QueryCounter::new();
            let classical = classical_deutsch_two_query(&inst.oracle(), &mut classical_counter)?;
            let mut report = RunReport::new("deutsch", 1, cfg.seed, trial);
            report.queries = out.queries;
            report.aux_gate_count = out.aux_gates;
            report.success = out.answer == inst.c1
                && (out.answer_probability - 1.0).abs() <= 1e-9
                && classical == inst.c1
                && classical_counter.count() == 2;
            report.outcome = json!({
                "c0": u8::from(inst.c0),
                "c1": u8::from(inst.c1),
                "answer": u8::from(out.answer),
                "phase": out.phase.re.round() as i8,
                "classical_two_query": u8::from(classical),
                "one_query_strategies_refuted": impossibility.strategies.len(),
            });
            reports.push(report);
        }
        Ok(reports)
    }
}

// --- simon -----------------------------------------------------------------

struct SimonExperiment;

impl Experiment for SimonExperiment {
    fn name(&self) -> &'static str {
        "simon"
    }

    fn about(&self) -> &'static str {
        "Simon's algorithm on a random promised instance of width n"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n = cfg.require_n()?;
        let mut rng = trial_rng(cfg, trial);
        let inst = SimonInstance::random(n, &mut rng)?;
        let mut counter = QueryCounter::new();
        let out = qcw::algorithms::simon(&inst.oracle, &mut rng, &mut counter)?;
        let mut report = RunReport::new("simon", n, cfg.seed, trial);
        report.queries = out.queries;
        report.aux_gate_count = out.aux_gates;
        report.success = out.mask == inst.s && qcw::algorithms::verify_mask(&inst.oracle, out.mask).is_ok();
        report.outcome = json!({
            "mask": mask_to_bits(out.mask, n),
            "rounds": out.rounds,
        });
        Ok(vec![report])
    }
}

// --- grover ----------------------------------------------------------------

struct GroverExperiment;

impl Experiment for GroverExperiment {
    fn name(&self) -> &'static str {
        "grover"
    }

    fn about(&self) -> &'static str {
        "Grover search for f(x)=1; oracle from --marked BITS or --oracle FILE"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let (oracle, known, n) = match (&cfg.marked, &cfg.oracle_path) {
            (Some(bits), None) => {
                let n = bits.len();
                if let Some(expected) = cfg.n {
                    if expected != n {
                        return Err(CliError::Config(format!(
                            "--marked has {n} bits but --n is {expected}"
                        )));
                    }
                }
                let idx = u64::from_str_radix(bits, 2)
                    .map_err(|e| CliError::Config(format!("--marked: {e}")))?;
                (OracleFunction::indicator(n, &[idx])?, Some(1), n)
            }
            (None, Some(path)) => {
                let text = cfg.read_file(path)?;
                let oracle =
                    parse_truth_table(&text).map_err(|e| CliError::File(e.to_string()))?;
                let n = oracle.in_bits();
                if let Some(expected) = cfg.n {
                    if expected != n {
                        return Err(CliError::Config(format!(
                            "--oracle is over {n} bits but --n is {expected}"
                        )));
                    }
                }
                (oracle, None, n)
            }
            _ => {
                return Err(CliError::Config(
                    "grover requires exactly one of --marked or --oracle".into(),
                ))
            }
        };
        let mut rng = trial_rng(cfg, trial);
        let run = grover_search(&oracle, known, cfg.eps, &mut rng)?;
        let mut report = RunReport::new("grover", n, cfg.seed, trial);
        report.queries = run.queries;
        report.aux_gate_count = run.aux_gates;
        // Witnesses are verified inside the search; success here also checks
        // the negative answer against the truth table.
        let truly_empty = (0..1u64 << n).all(|x| oracle.eval(x) == 0);
        report.success = match run.outcome {
            Some(w) => oracle.eval(w) == 1,
            None => truly_empty,
        };
        report.outcome = match run.outcome {
            Some(w) => json!({ "witness": input_to_bits(w, n) }),
            None => json!({ "witness": null }),
        };
        Ok(vec![report])
    }
}

// --- sat ---------------------------------------------------------------------

struct SatExperiment;

impl Experiment for SatExperiment {
    fn name(&self) -> &'static str {
        "sat"
    }

    fn about(&self) -> &'static str {
        "Grover-based circuit satisfiability on a circuit JSON file"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let path = cfg
            .circuit_path
            .as_ref()
            .ok_or_else(|| CliError::Config("sat requires --circuit".into()))?;
        let text = cfg.read_file(path)?;
        let circuit =
            boolcircuit::circuit_from_json(&text).map_err(|e| CliError::File(e.to_string()))?;
        let encoding = boolcircuit::encode(&circuit)?;
        let mut rng = trial_rng(cfg, trial);
        let run = quantum_sat(&encoding, cfg.eps, &mut rng)?;
        let truth = brute_force_sat(&circuit)?;
        let mut report = RunReport::new("sat", run.n, cfg.seed, trial);
        report.queries = run.queries;
        report.aux_gate_count = run.aux_gates;
        report.success = run.satisfiable == truth.satisfiable;
        report.outcome = json!({
            "satisfiable": run.satisfiable,
            "witness": run.witness.map(|w| input_to_bits(w, run.n)),
            "per_query_gates": run.per_query_gates,
            "total_gates": run.total_gates,
            "encoding_bits": encoding.len(),
        });
        Ok(vec![report])
    }
}

// --- or-and -------------------------------------------------------------------

struct OrAndExperiment;

impl Experiment for OrAndExperiment {
    fn name(&self) -> &'static str {
        "or-and"
    }

    fn about(&self) -> &'static str {
        "Two-level OR-AND alternation over a random oracle on n1 + n2 bits"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n1 = cfg
            .n1
            .ok_or_else(|| CliError::Config("or-and requires --n1".into()))?;
        let n2 = cfg
            .n2
            .ok_or_else(|| CliError::Config("or-and requires --n2".into()))?;
        let mut rng = trial_rng(cfg, trial);
        // Dense tables make the all-ones inner rows reachable.
        let table: Vec<u64> = {
            use rand_chacha::rand_core::RngCore;
            (0..1u64 << (n1 + n2))
                .map(|_| u64::from(rng.next_u32() % 16 != 0))
                .collect()
        };
        let oracle = OracleFunction::from_table(n1 + n2, 1, table.clone())?;
        let run = nested_or_and(&oracle, n1, n2, cfg.eps, &mut rng)?;
        let brute = (0..1u64 << n1)
            .any(|x1| (0..1u64 << n2).all(|x2| table[((x1 << n2) | x2) as usize] == 1));
        let mut report = RunReport::new("or-and", n1 + n2, cfg.seed, trial);
        report.queries = run.queries;
        report.success = run.value == brute;
        report.outcome = json!({
            "value": run.value,
            "witness_x1": run.witness.map(|w| input_to_bits(w, n1)),
        });
        Ok(vec![report])
    }
}

// --- parity ---------------------------------------------------------------------

struct ParityExperiment;

impl Experiment for ParityExperiment {
    fn name(&self) -> &'static str {
        "parity"
    }

    fn about(&self) -> &'static str {
        "Brute-force PARITY(f) of a random oracle: all 2^n queries"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n = cfg.require_n()?;
        let mut rng = trial_rng(cfg, trial);
        let oracle = OracleFunction::random_boolean(n, &mut rng);
        let mut counter = QueryCounter::new();
        let value = parity_brute(&oracle, &mut counter)?;
        let popcount: u64 = (0..1u64 << n).map(|x| oracle.eval(x)).sum();
        let mut report = RunReport::new("parity", n, cfg.seed, trial);
        report.queries = counter.count();
        report.success = value == (popcount % 2 == 1) && counter.count() == 1 << n;
        report.outcome = json!({ "parity": u8::from(value) });
        Ok(vec![report])
    }
}

// --- order ------------------------------------------------------------------------

struct OrderExperiment;

impl Experiment for OrderExperiment {
    fn name(&self) -> &'static str {
        "order"
    }

    fn about(&self) -> &'static str {
        "Multiplicative order of a modulo N by brute force"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let a = cfg
            .base
            .ok_or_else(|| CliError::Config("order requires --a".into()))?;
        let n = cfg
            .modulus
            .ok_or_else(|| CliError::Config("order requires --N".into()))?;
        let result = brute_force_order(a, n)?;
        let mut report = RunReport::new("order", n as usize, cfg.seed, trial);
        report.success = qcw::numtheory::powmod(result.a, result.r, n) == 1;
        report.outcome = json!({ "a": result.a, "N": n, "r": result.r });
        Ok(vec![report])
    }
}

// --- factor -------------------------------------------------------------------------

struct FactorExperiment;

impl Experiment for FactorExperiment {
    fn name(&self) -> &'static str {
        "factor"
    }

    fn about(&self) -> &'static str {
        "Prime factorization via the order-finding reduction"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n = cfg
            .modulus
            .ok_or_else(|| CliError::Config("factor requires --N".into()))?;
        let mut rng = trial_rng(cfg, trial);
        let mut order_queries = 0u64;
        let mut source = |a: u64, m: u64| {
            order_queries += 1;
            brute_force_order(a, m)
        };
        let factors = factor_from_order(n, &mut source, &mut rng)?;
        let product: u64 = factors.iter().product();
        let mut report = RunReport::new("factor", n as usize, cfg.seed, trial);
        report.queries = order_queries;
        report.success = product == n;
        report.outcome = json!({ "factors": factors });
        Ok(vec![report])
    }
}

// --- eq ------------------------------------------------------------------------------

struct EqExperiment;

impl Experiment for EqExperiment {
    fn name(&self) -> &'static str {
        "eq"
    }

    fn about(&self) -> &'static str {
        "Fingerprint equality protocol on random pairs (even trials equal, odd unequal)"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n = cfg.require_n()?;
        let mut rng = trial_rng(cfg, trial);
        use rand_chacha::rand_core::RngCore;
        let x: Vec<bool> = (0..n).map(|_| rng.next_u32() & 1 == 1).collect();
        let equal = trial % 2 == 0;
        let mut y = x.clone();
        if !equal {
            let flip = (rng.next_u64() % n as u64) as usize;
            y[flip] = !y[flip];
        }
        let rounds = fp_rounds_for_eps(cfg.eps)?;
        let (accepted, transcript) = eq_fingerprint(&x, &y, rounds, &mut rng)?;
        let mut report = RunReport::new("eq", n, cfg.seed, trial);
        report.success = accepted == equal;
        report.outcome = json!({ "accepted": accepted, "inputs_equal": equal, "rounds": rounds });
        report.communication = Some(serde_json::to_value(TranscriptJson::new(
            "eq",
            n,
            cfg.seed,
            &transcript,
            json!(accepted),
            accepted == equal,
        )).expect("transcript serializes"));
        Ok(vec![report])
    }
}

// --- intersect -----------------------------------------------------------------------

struct IntersectExperiment;

impl Experiment for IntersectExperiment {
    fn name(&self) -> &'static str {
        "intersect"
    }

    fn about(&self) -> &'static str {
        "Distributed-query intersection protocol on random subset pairs"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n = cfg.require_n()?;
        let mut rng = trial_rng(cfg, trial);
        use rand_chacha::rand_core::RngCore;
        let x: Vec<bool> = (0..n).map(|_| rng.next_u32() % 4 == 0).collect();
        let y: Vec<bool> = (0..n).map(|_| rng.next_u32() % 4 == 0).collect();
        let run = intersection_protocol(&x, &y, cfg.eps, &mut rng)?;
        let classical = x.iter().zip(&y).any(|(&a, &b)| a && b);
        let mut report = RunReport::new("intersect", n, cfg.seed, trial);
        report.queries = run.queries;
        report.aux_gate_count = run.aux_gates;
        report.success = run.found == classical;
        report.outcome = json!({
            "found": run.found,
            "witness": run.witness,
            "classical_in": classical,
        });
        report.communication = Some(serde_json::to_value(TranscriptJson::new(
            "intersect",
            n,
            cfg.seed,
            &run.transcript,
            json!(run.found),
            run.verified || (!run.found && !classical),
        )).expect("transcript serializes"));
        Ok(vec![report])
    }
}

// --- ip-check ------------------------------------------------------------------------

struct IpCheckExperiment;

impl Experiment for IpCheckExperiment {
    fn name(&self) -> &'static str {
        "ip-check"
    }

    fn about(&self) -> &'static str {
        "IP(x,y) = PARITY(f_x AND f_y): exhaustive for n <= 8, sampled above"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let n = cfg.require_n()?;
        if !n.is_power_of_two() {
            return Err(CliError::Config(format!("--n must be a power of two, got {n}")));
        }
        let mut rng = trial_rng(cfg, trial);
        use rand_chacha::rand_core::RngCore;
        let exhaustive = n <= 8;
        let mut pairs_checked = 0u64;
        let mut all_agree = true;
        let mut check = |x: &[bool], y: &[bool]| -> Result<(), CliError> {
            let (direct, brute) = ip_parity_identity(x, y)?;
            pairs_checked += 1;
            if direct != brute {
                all_agree = false;
            }
            Ok(())
        };
        if exhaustive {
            for xi in 0..1u64 << n {
                for yi in 0..1u64 << n {
                    let x: Vec<bool> = (0..n).map(|j| xi >> (n - 1 - j) & 1 == 1).collect();
                    let y: Vec<bool> = (0..n).map(|j| yi >> (n - 1 - j) & 1 == 1).collect();
                    check(&x, &y)?;
                }
            }
        } else {
            for _ in 0..20_000 {
                let x: Vec<bool> = (0..n).map(|_| rng.next_u32() & 1 == 1).collect();
                let y: Vec<bool> = (0..n).map(|_| rng.next_u32() & 1 == 1).collect();
                check(&x, &y)?;
            }
        }
        let mut report = RunReport::new("ip-check", n, cfg.seed, trial);
        report.queries = pairs_checked * (n as u64);
        report.success = all_agree;
        report.outcome = json!({
            "pairs_checked": pairs_checked,
            "exhaustive": exhaustive,
            "all_agree": all_agree,
        });
        Ok(vec![report])
    }
}

// --- simulate ------------------------------------------------------------------------

struct SimulateExperiment;

impl Experiment for SimulateExperiment {
    fn name(&self) -> &'static str {
        "simulate"
    }

    fn about(&self) -> &'static str {
        "Run a gate-list circuit file on a basis input and measure"
    }

    fn run_trial(&self, cfg: &RunConfig, trial: usize) -> Result<Vec<RunReport>, CliError> {
        let path = cfg
            .circuit_path
            .as_ref()
            .ok_or_else(|| CliError::Config("simulate requires --circuit".into()))?;
        let text = cfg.read_file(path)?;
        let circuit = parse_circuit_text(&text).map_err(|e| CliError::File(e.to_string()))?;
        let input = cfg
            .input
            .as_ref()
            .ok_or_else(|| CliError::Config("simulate requires --input BITS".into()))?;
        let mut state = StateVector::basis_state(circuit.num_qubits, input)?;
        state.apply_circuit(&circuit)?;
        let mut rng = trial_rng(cfg, trial);
        let norm = state.norm();
        let sample = state.measure_all(&mut rng);
        let mut report = RunReport::new("simulate", circuit.num_qubits, cfg.seed, trial);
        report.aux_gate_count = circuit.len() as u64;
        report.success = (norm - 1.0).abs() <= 1e-9;
        report.outcome = json!({
            "outcome": sample.outcome,
            "probability": sample.probability,
        });
        Ok(vec![report])
    }
}
