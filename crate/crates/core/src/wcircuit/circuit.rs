use alloc::vec::Vec;

use crate::gates::{controlled_phase, imperfect_hadamard, imperfect_t_prime, Gate};
use crate::noise::NoiseParams;
use crate::statevec::StateVector;
use crate::{Error, Result, C64};

/// Tolerance on the |0⟩ precondition for the ancilla and the joining qubit.
pub const ZERO_INPUT_TOL: f64 = 1e-10;

/// Wire of the three-qubit expansion operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// The qubit being expanded (a member of the W state).
    Input1,
    /// Mediating qubit; starts and ideally ends in |0⟩.
    Ancilla,
    /// Fresh |0⟩ qubit that joins the W state.
    Input2,
}

impl Slot {
    /// Position in the standalone 3-qubit register |q1, anc, q2⟩.
    pub fn index(self) -> usize {
        match self {
            Slot::Input1 => 0,
            Slot::Ancilla => 1,
            Slot::Input2 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitStep {
    pub gate: Gate,
    pub targets: Vec<Slot>,
    pub order_index: usize,
    /// Gate name with its per-type subscript, e.g. `CZ_3`.
    pub name: &'static str,
}

/// The 12-gate decomposition of the expansion operation O into four
/// controlled-phase gates, six Hadamards and two T′ gates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCircuit {
    steps: Vec<CircuitStep>,
}

impl ExpansionCircuit {
    /// Ideal gates.
    pub fn standard() -> Self {
        Self::with_noise(&NoiseParams::IDEAL)
    }

    /// Every Hadamard replaced by H(α), every T′ by T′(β) and every CZ by
    /// CP(γ), with the same parameters shared across gate instances.
    pub fn with_noise(noise: &NoiseParams) -> Self {
        use Slot::*;
        let h = imperfect_hadamard(noise.alpha);
        let t = imperfect_t_prime(noise.beta);
        let cp = controlled_phase(noise.gamma);
        let layout: [(&Gate, &[Slot], &'static str); 12] = [
            (&t, &[Ancilla], "T'_1"),
            (&cp, &[Input1, Ancilla], "CZ_1"),
            (&t, &[Ancilla], "T'_2"),
            (&h, &[Input1], "H_1"),
            (&cp, &[Input1, Ancilla], "CZ_2"),
            (&h, &[Input1], "H_2"),
            (&h, &[Input2], "H_3"),
            (&cp, &[Ancilla, Input2], "CZ_3"),
            (&h, &[Input2], "H_4"),
            (&h, &[Ancilla], "H_5"),
            (&cp, &[Ancilla, Input2], "CZ_4"),
            (&h, &[Ancilla], "H_6"),
        ];
        let steps = layout
            .iter()
            .enumerate()
            .map(|(order_index, (gate, targets, name))| CircuitStep {
                gate: (*gate).clone(),
                targets: targets.to_vec(),
                order_index,
                name,
            })
            .collect();
        Self { steps }
    }

    pub fn steps(&self) -> &[CircuitStep] {
        &self.steps
    }

    /// Runs the steps on an arbitrary register with the three wires mapped to
    /// `q1`, `anc`, `q2`. No precondition on the input state.
    pub fn run(&self, state: &mut StateVector, q1: usize, anc: usize, q2: usize) -> Result<()> {
        self.run_range(state, [q1, anc, q2], 0..self.steps.len())
    }

    pub(crate) fn run_range(
        &self,
        state: &mut StateVector,
        wires: [usize; 3],
        range: core::ops::Range<usize>,
    ) -> Result<()> {
        check_distinct(state, wires)?;
        for step in &self.steps[range] {
            match step.targets.as_slice() {
                [a] => state.apply_1q(&step.gate, wires[a.index()])?,
                [a, b] => state.apply_2q(&step.gate, wires[a.index()], wires[b.index()])?,
                _ => unreachable!("expansion steps act on one or two wires"),
            }
        }
        Ok(())
    }

    /// The state after each step, starting from `input` on |q1, anc, q2⟩.
    pub fn trace_states(&self, input: &StateVector) -> Result<Vec<StateVector>> {
        let mut state = input.clone();
        let mut out = Vec::with_capacity(self.steps.len());
        for i in 0..self.steps.len() {
            self.run_range(&mut state, [0, 1, 2], i..i + 1)?;
            out.push(state.clone());
        }
        Ok(out)
    }

    /// Composed 8×8 unitary in the |q1, anc, q2⟩ basis, built column by
    /// column from basis-state runs.
    pub fn unitary(&self) -> Result<[[C64; 8]; 8]> {
        let mut m = [[C64::new(0.0, 0.0); 8]; 8];
        for col in 0..8 {
            let mut s = StateVector::basis(3, col)?;
            self.run(&mut s, 0, 1, 2)?;
            for (row, a) in m.iter_mut().zip(s.amplitudes()) {
                row[col] = *a;
            }
        }
        Ok(m)
    }

    /// Runs the circuit after checking that `anc` and `q2` are in |0⟩.
    pub fn apply(&self, state: &mut StateVector, q1: usize, anc: usize, q2: usize) -> Result<()> {
        check_distinct(state, [q1, anc, q2])?;
        state.require_zero(anc, ZERO_INPUT_TOL)?;
        state.require_zero(q2, ZERO_INPUT_TOL)?;
        self.run(state, q1, anc, q2)
    }
}

fn check_distinct(state: &StateVector, wires: [usize; 3]) -> Result<()> {
    for &w in &wires {
        if w >= state.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: w,
                num_qubits: state.num_qubits(),
            });
        }
    }
    if wires[0] == wires[1] || wires[0] == wires[2] {
        return Err(Error::DuplicateQubit(wires[0]));
    }
    if wires[1] == wires[2] {
        return Err(Error::DuplicateQubit(wires[1]));
    }
    Ok(())
}

/// Applies the ideal expansion operation O on (`q1`, `anc`, `q2`).
///
/// `anc` and `q2` must be in |0⟩; each weight-one term with its excitation
/// on `q1` splits evenly between `q1` and `q2`, and the ancilla returns to
/// |0⟩.
pub fn apply_o(state: &mut StateVector, q1: usize, anc: usize, q2: usize) -> Result<()> {
    ExpansionCircuit::standard().apply(state, q1, anc, q2)
}
