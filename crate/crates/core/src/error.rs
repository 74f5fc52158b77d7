use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} used more than once in a single operation")]
    DuplicateQubit(usize),

    #[error("gate `{label}` is not unitary (max |U†U - I| = {deviation:e})")]
    NonUnitary { label: String, deviation: f64 },

    #[error("gate `{label}` acts on {arity} qubit(s), operation expects {expected}")]
    ArityMismatch {
        label: String,
        arity: usize,
        expected: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("empty qubit set")]
    EmptyQubitSet,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("mixed state: purity {purity} is below 1 - {tol:e}")]
    MixedState { purity: f64, tol: f64 },

    #[error("qubit {qubit} is not in |0⟩: reduced state [[{rho00:.3e}, {rho01:.3e}], [.., {rho11:.3e}]]")]
    NotInZeroState {
        qubit: usize,
        rho00: f64,
        rho01: f64,
        rho11: f64,
    },

    #[error(
        "state has support outside the weight-one basis strings (weight {weight} at index {index})"
    )]
    NotWeightOne { index: usize, weight: u32 },

    #[error("n must be at least 1")]
    ZeroQubits,

    #[error("{mode} mode supports n ≤ {max}, got n = {n}")]
    PlanTooLarge {
        mode: &'static str,
        n: usize,
        max: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
