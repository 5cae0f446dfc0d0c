//! Grover search over a counted oracle backend, plus the OR/AND wrappers and
//! the two-level OR-AND alternation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algorithms::backend::{LocalBackend, QueryAlgorithm, QueryAlgorithmOutput, QueryBackend};
use crate::error::{Error, Result};
use crate::oracle::OracleFunction;

/// Query budget for an unknown solution count:
/// `BUDGET_FACTOR · √(2^k · log2(1/ε))` oracle queries before giving up.
pub const BUDGET_FACTOR: f64 = 4.0;

/// Growth rate of the iteration-guess ceiling in the doubling schedule.
const GUESS_GROWTH: f64 = 8.0 / 7.0;

/// Statevector guard: Grover instances above this index width are refused.
const MAX_SEARCH_BITS: usize = 20;

/// Outcome of one Grover search run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverRun {
    /// Index register width.
    pub n: usize,
    /// Oracle queries spent, classical and quantum.
    pub queries: u64,
    /// Verified witness with f(witness) = 1, if one was found.
    pub outcome: Option<u64>,
    /// Whether a witness was found and verified.
    pub success: bool,
    /// Non-query gates applied.
    pub aux_gates: u64,
}

/// Iteration count for a known solution count: ⌊(π/4)·√(2^k/t)⌋.
pub fn iterations_for_known_count(k: usize, solutions: u64) -> u64 {
    debug_assert!(solutions > 0);
    let ratio = (1u64 << k) as f64 / solutions as f64;
    (std::f64::consts::FRAC_PI_4 * ratio.sqrt()).floor() as u64
}

/// Closed-form success probability of measuring a solution after `r`
/// iterations with `t` of 2^k points marked: sin²((2r+1)·asin(√(t/2^k))).
pub fn rotation_success_probability(k: usize, solutions: u64, iterations: u64) -> f64 {
    let theta = ((solutions as f64 / (1u64 << k) as f64).sqrt()).asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// The query budget for the unknown-count schedule.
pub fn query_budget(k: usize, eps: f64) -> u64 {
    let n_points = (1u64 << k) as f64;
    (BUDGET_FACTOR * (n_points * (1.0 / eps).log2()).sqrt()).ceil() as u64
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "error budget ε must lie in (0, 0.5], got {eps}"
        )));
    }
    Ok(())
}

/// One pass of `iterations` Grover iterations from the uniform state,
/// followed by a measurement and a classical verification query.
fn grover_attempt(
    backend: &mut dyn QueryBackend,
    iterations: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<u64>> {
    backend.reset()?;
    backend.hadamard_index()?;
    for _ in 0..iterations {
        backend.oracle_query()?;
        backend.hadamard_index()?;
        backend.reflect_about_zero()?;
        backend.hadamard_index()?;
    }
    let candidate = backend.measure_index(rng)?;
    if backend.classical_query(candidate)? {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

/// Grover search against an arbitrary backend.
///
/// With a known solution count the fixed rotation count is used and repeated
/// until the per-run failure probability compounds below ε. With an unknown
/// count the doubling-guess schedule runs until a witness verifies or the
/// query budget `BUDGET_FACTOR·√(2^k·log2(1/ε))` is spent; exhausting the
/// budget returns `success = false` (that is the correct answer for an empty
/// oracle, not an error). Witnesses are always re-verified with one
/// classical query, so a reported success is never a false positive.
pub fn grover_search_with_backend(
    backend: &mut dyn QueryBackend,
    known_solutions: Option<u64>,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<GroverRun> {
    check_eps(eps)?;
    let k = backend.index_bits();
    if k > MAX_SEARCH_BITS {
        return Err(Error::ResourceLimit(format!(
            "search over {k} index bits exceeds the {MAX_SEARCH_BITS}-bit statevector guard"
        )));
    }
    let start_queries = backend.queries();
    let outcome = match known_solutions {
        Some(t) if t > 0 => {
            let t = t.min(1 << k);
            let r = iterations_for_known_count(k, t);
            let p_fail = 1.0 - rotation_success_probability(k, t, r);
            let reps = if p_fail <= 0.0 {
                1
            } else {
                (eps.ln() / p_fail.ln()).ceil().max(1.0) as u64
            };
            let mut found = None;
            for _ in 0..reps.min(1000) {
                if let Some(w) = grover_attempt(backend, r, rng)? {
                    found = Some(w);
                    break;
                }
            }
            found
        }
        _ => {
            let budget = query_budget(k, eps);
            let max_guess = ((1u64 << k) as f64).sqrt();
            let mut ceiling = 1.0f64;
            let mut found = None;
            while backend.queries() - start_queries < budget {
                // Clamp so the attempt (its iterations plus one verification
                // query) cannot push past the budget.
                let remaining = budget - (backend.queries() - start_queries);
                let guess = rng
                    .gen_range(0..=ceiling.floor() as u64)
                    .min(remaining.saturating_sub(1));
                if let Some(w) = grover_attempt(backend, guess, rng)? {
                    found = Some(w);
                    break;
                }
                ceiling = (ceiling * GUESS_GROWTH).min(max_guess.max(1.0));
            }
            found
        }
    };
    Ok(GroverRun {
        n: k,
        queries: backend.queries() - start_queries,
        outcome,
        success: outcome.is_some(),
        aux_gates: backend.aux_gates(),
    })
}

/// Grover search for f(x) = 1 over a plain boolean oracle.
pub fn grover_search(
    oracle: &OracleFunction,
    known_solutions: Option<u64>,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<GroverRun> {
    let mut backend = LocalBackend::new(oracle.clone())?;
    grover_search_with_backend(&mut backend, known_solutions, eps, rng)
}

/// Analytic success probability after the canonical ⌊(π/4)√(2^k/t)⌋
/// iterations, read off the statevector rather than sampled. Returns the
/// probability together with the oracle queries spent.
pub fn grover_fixed_iteration_probability(
    oracle: &OracleFunction,
    iterations: u64,
) -> Result<(f64, u64)> {
    let mut backend = LocalBackend::new(oracle.clone())?;
    backend.reset()?;
    backend.hadamard_index()?;
    for _ in 0..iterations {
        backend.oracle_query()?;
        backend.hadamard_index()?;
        backend.reflect_about_zero()?;
        backend.hadamard_index()?;
    }
    let marked = oracle.clone();
    let p = backend.index_probability(&move |i| marked.eval(i) == 1);
    Ok((p, backend.queries()))
}

/// OR(f) = (∃x) f(x): the Grover success flag.
pub fn grover_or(oracle: &OracleFunction, eps: f64, rng: &mut ChaCha8Rng) -> Result<GroverRun> {
    grover_search(oracle, None, eps, rng)
}

/// AND(f) = (∀x) f(x) = ¬(∃x) ¬f(x).
pub fn grover_and(oracle: &OracleFunction, eps: f64, rng: &mut ChaCha8Rng) -> Result<GroverRun> {
    let run = grover_or(&oracle.negated()?, eps, rng)?;
    Ok(GroverRun {
        success: !run.success,
        outcome: run.outcome,
        ..run
    })
}

/// Result of the two-level alternation OR-AND.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedRun {
    pub value: bool,
    /// Outer-level witness x1 when the OR succeeded.
    pub witness: Option<u64>,
    /// Total oracle queries across the inner and outer levels.
    pub queries: u64,
}

/// OR-AND(f) = (∃x1)(∀x2) f(x1, x2) by recursive application of Grover.
///
/// Each inner AND over x2 runs at error ε/(2·2^{n1}) so a union bound keeps
/// the whole inner layer below ε/2, then the outer OR over the amplified
/// inner answers runs at ε/2. This sequential simulation evaluates the inner
/// level once per x1, so its query total carries an extra √(2^{n1}) factor
/// over the coherent bound; see `NESTED_BUDGET_FACTOR`.
pub fn nested_or_and(
    oracle: &OracleFunction,
    n1: usize,
    n2: usize,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<NestedRun> {
    check_eps(eps)?;
    if oracle.in_bits() != n1 + n2 {
        return Err(Error::InvalidInput(format!(
            "oracle takes {} bits, expected n1 + n2 = {}",
            oracle.in_bits(),
            n1 + n2
        )));
    }
    if n1 + n2 > 16 {
        return Err(Error::ResourceLimit(
            "nested OR-AND is capped at 16 total bits".into(),
        ));
    }
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput("both levels need at least one bit".into()));
    }
    let eps_inner = eps / (2.0 * (1u64 << n1) as f64);
    // The inner-error floor keeps check_eps happy for tiny ε.
    let eps_inner = eps_inner.max(1e-9);
    let mut total_queries = 0u64;
    let mut inner_values = vec![false; 1 << n1];
    for x1 in 0..1u64 << n1 {
        let o = oracle.clone();
        let inner = OracleFunction::from_fn(n2, 1, move |x2| o.eval((x1 << n2) | x2));
        let run = grover_and(&inner, eps_inner, rng)?;
        total_queries += run.queries;
        inner_values[x1 as usize] = run.success;
    }
    let outer_oracle = OracleFunction::from_table(
        n1,
        1,
        inner_values.iter().map(|&b| u64::from(b)).collect(),
    )?;
    let outer = grover_or(&outer_oracle, eps / 2.0, rng)?;
    total_queries += outer.queries;
    Ok(NestedRun {
        value: outer.success,
        witness: outer.outcome,
        queries: total_queries,
    })
}

/// Empirical query-budget constant for the sequential OR-AND simulation:
/// total queries stay below
/// `NESTED_BUDGET_FACTOR · √(2^n · n · log2(1/ε))` at the desk scales this
/// crate runs.
pub const NESTED_BUDGET_FACTOR: f64 = 16.0;

/// Grover-OR as a pluggable query algorithm (used by the protocol compiler).
pub struct GroverOrAlgorithm;

impl QueryAlgorithm for GroverOrAlgorithm {
    fn name(&self) -> &'static str {
        "grover-or"
    }

    fn run(
        &self,
        backend: &mut dyn QueryBackend,
        eps: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<QueryAlgorithmOutput> {
        let run = grover_search_with_backend(backend, None, eps, rng)?;
        Ok(QueryAlgorithmOutput {
            bit: run.success,
            witness: run.outcome,
        })
    }
}
