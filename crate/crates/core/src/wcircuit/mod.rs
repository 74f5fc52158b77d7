//! W-state construction on top of the expansion operation O.
//!
//! O acts on (input 1, ancilla, input 2). With input 1 carrying one qubit of
//! a W state and the other two in |0⟩, the term where input 1 is excited
//! splits into two equal-weight terms, one of which moves the excitation to
//! input 2. Repeating this over every qubit of |W_n⟩ with a fresh partner
//! each time yields |W_2n⟩.

mod circuit;
mod doubling;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use libm::sqrt;

pub use circuit::{apply_o, CircuitStep, ExpansionCircuit, Slot, ZERO_INPUT_TOL};
pub use doubling::{
    double_w, interleave_permutation, AncillaRecord, DoublingMode, DoublingOutcome, DoublingPlan,
    RunReport, Schedule, BLOCK_MAX_N, SEQUENTIAL_MAX_N,
};

use crate::noise::NoiseParams;
use crate::statevec::StateVector;
use crate::{Error, Result, ALGEBRAIC_TOL, C64};

/// Amplitudes at or below this magnitude count as zero for support checks.
pub const SUPPORT_TOL: f64 = 1e-12;

/// |W_n⟩: amplitude 1/√n on each weight-one basis string.
pub fn build_w_state(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::ZeroQubits);
    }
    let amp = C64::new(1.0 / sqrt(n as f64), 0.0);
    let mut amps = alloc::vec![C64::new(0.0, 0.0); 1 << n];
    for j in 0..n {
        amps[1 << j] = amp;
    }
    StateVector::from_amplitudes(amps)
}

/// Errors if any amplitude above [`SUPPORT_TOL`] sits on a basis string that
/// does not have exactly one excitation.
pub fn check_weight_one(state: &StateVector) -> Result<()> {
    for (index, a) in state.amplitudes().iter().enumerate() {
        let weight = index.count_ones();
        if weight != 1 && a.norm() > SUPPORT_TOL {
            return Err(Error::NotWeightOne { index, weight });
        }
    }
    Ok(())
}

/// (|10⟩ + |01⟩)/√2 from |1⟩|0⟩|0⟩ through O, with the ancilla traced out.
pub fn create_epr() -> Result<StateVector> {
    let mut s = StateVector::from_bits("100")?;
    apply_o(&mut s, 0, 1, 2)?;
    s.require_zero(1, ALGEBRAIC_TOL)?;
    s.reduce_to_pure(&[0, 2], 1e-9)
}

/// Grows a W or W-like state by one qubit by running O with `target` as
/// input 1.
///
/// The new qubit is inserted directly after `target`, and the ancilla is
/// appended, used and removed internally. With imperfect gates the ancilla
/// may not return to |0⟩; the result is then the state conditioned on the
/// ancilla being found in |0⟩, renormalized.
pub fn expand_by_one(w: &StateVector, target: usize, noise: &NoiseParams) -> Result<StateVector> {
    if target >= w.num_qubits() {
        return Err(Error::QubitOutOfRange {
            index: target,
            num_qubits: w.num_qubits(),
        });
    }
    check_weight_one(w)?;
    let joined = target + 1;
    let mut reg = w.insert_zero_qubit(joined)?;
    let anc = reg.num_qubits();
    reg = reg.insert_zero_qubit(anc)?;
    ExpansionCircuit::with_noise(noise).apply(&mut reg, target, anc, joined)?;
    let (logical, _) = reg.take_zero_slice(anc)?;
    StateVector::normalized(logical.into_amplitudes())
}

/// Physical encoding of logical |0⟩ and |1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitRole {
    /// Circularly polarized photons: |0⟩ = |R⟩, |1⟩ = |L⟩.
    Photonic,
    /// Emitter spin: |0⟩ = |+⟩, |1⟩ = |−⟩.
    Spin,
}

impl QubitRole {
    /// Labels for logical (|0⟩, |1⟩).
    pub fn labels(self) -> (char, char) {
        match self {
            QubitRole::Photonic => ('R', 'L'),
            QubitRole::Spin => ('+', '−'),
        }
    }

    pub fn label_basis(self, index: usize, num_qubits: usize) -> String {
        let (zero, one) = self.labels();
        (0..num_qubits)
            .map(|q| {
                if index & (1 << (num_qubits - 1 - q)) != 0 {
                    one
                } else {
                    zero
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTerm {
    pub label: String,
    pub amplitude: C64,
}

/// A state rendered in physical labels. Terms run from the highest basis
/// index down, so the excitation on the first qubit is listed first.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    pub role: QubitRole,
    pub terms: Vec<LabeledTerm>,
}

/// Presentational relabeling; amplitudes are untouched.
pub fn relabel(state: &StateVector, role: QubitRole) -> LabeledState {
    let k = state.num_qubits();
    let terms = state
        .amplitudes()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, a)| a.norm() > SUPPORT_TOL)
        .map(|(i, a)| LabeledTerm {
            label: role.label_basis(i, k),
            amplitude: *a,
        })
        .collect();
    LabeledState { role, terms }
}

impl LabeledState {
    /// Equal real positive amplitudes 1/√k render as `(|…⟩+|…⟩)/√k`; a lone
    /// unit term as `|…⟩`; anything else as `a|…⟩ + b|…⟩`.
    pub fn rendering(&self) -> String {
        let Some(first) = self.terms.first() else {
            return String::from("0");
        };
        let k = self.terms.len();
        let uniform = self
            .terms
            .iter()
            .all(|t| (t.amplitude - first.amplitude).norm() < 1e-9)
            && first.amplitude.im.abs() < 1e-9
            && (first.amplitude.re - 1.0 / sqrt(k as f64)).abs() < 1e-9;
        if uniform && k == 1 {
            return format!("|{}⟩", first.label);
        }
        if uniform {
            let body: Vec<String> = self
                .terms
                .iter()
                .map(|t| format!("|{}⟩", t.label))
                .collect();
            return format!("({})/√{}", body.join("+"), k);
        }
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}|{}⟩", format_amplitude(t.amplitude), t.label))
            .collect();
        body.join(" + ")
    }
}

impl fmt::Display for LabeledState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendering())
    }
}

fn format_amplitude(a: C64) -> String {
    if a.im.abs() < 1e-12 {
        format!("{:.6}", a.re)
    } else {
        format!("({:.6}{:+.6}i)", a.re, a.im)
    }
}
