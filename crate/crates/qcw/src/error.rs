//! Crate-wide error type.

/// Errors produced anywhere in the workbench.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition (bad length, bad
    /// index, bad range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The request is valid but exceeds a hard resource guard.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A circuit rewrite met a gate kind it cannot expand.
    #[error("cannot rewrite gate to target basis: {0}")]
    UnsupportedGate(String),

    /// A circuit encoding failed to decode.
    #[error("decode error at bit {offset}: {message}")]
    Decode { offset: usize, message: String },

    /// Reversible compilation rejected the circuit.
    #[error("compile error: {0}")]
    Compile(String),

    /// An oracle failed the promise its algorithm relies on.
    #[error("promise violation: {0}")]
    PromiseViolation(String),

    /// A party touched a qubit it does not own.
    #[error("ownership violation: {0}")]
    Ownership(String),

    /// A protocol or algorithm precondition failed at runtime.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An algorithm reached for its oracle outside the counted interface.
    #[error("query contract violation: {0}")]
    ContractViolation(String),

    /// A text or file format failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A randomized procedure exhausted its attempt budget.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
