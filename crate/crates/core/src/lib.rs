//! Deterministic preparation of W states from a three-qubit expansion
//! operation.
//!
//! The crate is `no_std` (it needs `alloc`) and split into:
//!
//! - [`statevec`]: dense state vectors, gate kernels, qubit permutations,
//!   partial traces and fidelities;
//! - [`gates`]: the real reflection rotation family (Hadamard, T′ and their
//!   imperfect variants), controlled-phase gates, and the half-wave-plate and
//!   holonomic realizations;
//! - [`wcircuit`]: the 12-gate expansion circuit, EPR creation, growth by one
//!   qubit and |W_n⟩ → |W_2n⟩ doubling;
//! - [`noise`]: closed-form fidelities under gate imperfections and their
//!   brute-force simulation counterpart;
//! - [`cavity`]: reflection coefficients of a cavity-coupled emitter and the
//!   regime in which they realize a controlled-Z gate.
//!
//! Qubit 0 is always the most significant bit of a basis index.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cavity;
mod error;
pub mod gates;
pub mod noise;
pub mod statevec;
pub mod wcircuit;

pub use error::{Error, Result};
pub use gates::{Gate, GateMatrix, HolonomicParams};
pub use noise::{FidelityDefinition, FidelityKind, FidelityRecord, NoiseParams};
pub use statevec::{DensityMatrix, QubitPermutation, StateVector};
pub use wcircuit::{
    DoublingMode, DoublingOutcome, DoublingPlan, ExpansionCircuit, QubitRole, RunReport, Schedule,
};

/// Complex amplitude type used everywhere in the crate.
pub type C64 = num_complex::Complex64;

/// Tolerance for algebraic identities (norms, unitarity, matrix equality).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Tolerance for simulation-vs-closed-form fidelity comparisons.
pub const SIMULATION_TOL: f64 = 1e-9;
