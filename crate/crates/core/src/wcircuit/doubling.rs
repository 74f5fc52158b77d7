use alloc::vec::Vec;
use core::time::Duration;

use super::{build_w_state, ExpansionCircuit};
use crate::noise::NoiseParams;
use crate::statevec::{QubitPermutation, StateVector};
use crate::{Error, Result};

/// Largest n for block mode (3n = 18 qubits).
pub const BLOCK_MAX_N: usize = 6;
/// Largest n for sequential mode.
pub const SEQUENTIAL_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoublingMode {
    /// One 3n-qubit register |W_n⟩|0⟩^n|0⟩_anc^n, rearranged into triples and
    /// acted on by O^⊗n.
    Block,
    /// O applied to one (w_i, anc, new_i) triple at a time.
    Sequential,
}

impl DoublingMode {
    pub fn max_n(self) -> usize {
        match self {
            DoublingMode::Block => BLOCK_MAX_N,
            DoublingMode::Sequential => SEQUENTIAL_MAX_N,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DoublingMode::Block => "block",
            DoublingMode::Sequential => "sequential",
        }
    }
}

/// Ancilla allocation for sequential doubling. Block mode always holds one
/// ancilla per triple, so there the schedule is only recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// One ancilla travels through every pair in turn.
    SerialAncilla,
    /// A dedicated ancilla per pair.
    ParallelAncilla,
}

impl Schedule {
    pub fn name(self) -> &'static str {
        match self {
            Schedule::SerialAncilla => "serial",
            Schedule::ParallelAncilla => "parallel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoublingPlan {
    n: usize,
    mode: DoublingMode,
    schedule: Schedule,
}

impl DoublingPlan {
    pub fn new(n: usize, mode: DoublingMode, schedule: Schedule) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        if n > mode.max_n() {
            return Err(Error::PlanTooLarge {
                mode: mode.name(),
                n,
                max: mode.max_n(),
            });
        }
        Ok(Self { n, mode, schedule })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> DoublingMode {
        self.mode
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }
}

/// Ancilla state right after one application of O, before any reset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaRecord {
    pub round: usize,
    pub purity: f64,
    pub excited_population: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub n: usize,
    pub mode: DoublingMode,
    pub schedule: Schedule,
    /// |⟨W_2n, 0_anc|ψ⟩|².
    pub fidelity: f64,
    /// ⟨W_2n| tr_anc |ψ⟩⟨ψ| |W_2n⟩.
    pub reduced_fidelity: f64,
    pub ancillas: Vec<AncillaRecord>,
    /// Weight removed by projecting a reused ancilla back onto |0⟩.
    pub discarded_weight: f64,
    pub peak_qubits: usize,
    /// Filled in by callers that have a clock.
    pub wall_time: Option<Duration>,
}

/// Full register after doubling, with the logical qubits in canonical order
/// (w_1..w_n, new_1..new_n) at positions `0..2n` and every ancilla after them.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingOutcome {
    pub register: StateVector,
    pub logical: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub report: RunReport,
}

impl DoublingOutcome {
    /// The 2n-qubit logical state, provided the ancillas factor off.
    pub fn logical_state(&self) -> Result<StateVector> {
        self.register.reduce_to_pure(&self.logical, 1e-9)
    }

    /// |⟨target, 0_anc|ψ⟩|².
    pub fn post_selected_fidelity(&self, target: &StateVector) -> Result<f64> {
        let phi = self.register.contract(&self.logical, target)?;
        Ok(phi[0].norm_sqr().min(1.0))
    }

    /// ⟨target| tr_anc |ψ⟩⟨ψ| |target⟩.
    pub fn reduced_fidelity(&self, target: &StateVector) -> Result<f64> {
        let phi = self.register.contract(&self.logical, target)?;
        Ok(phi.iter().map(|a| a.norm_sqr()).sum::<f64>().min(1.0))
    }
}

/// Takes register order (w_1..w_n, new_1..new_n, anc_1..anc_n) to triples
/// (w_i, anc_i, new_i).
pub fn interleave_permutation(n: usize) -> QubitPermutation {
    let mut map = alloc::vec![0; 3 * n];
    for i in 0..n {
        map[i] = 3 * i;
        map[n + i] = 3 * i + 2;
        map[2 * n + i] = 3 * i + 1;
    }
    QubitPermutation::new(map).expect("interleave is a bijection")
}

fn ancilla_record(state: &StateVector, anc: usize, round: usize) -> Result<AncillaRecord> {
    let rho = state.reduced_qubit(anc)?;
    let purity = rho.iter().flatten().map(|e| e.norm_sqr()).sum();
    Ok(AncillaRecord {
        round,
        purity,
        excited_population: rho[1][1].re,
    })
}

/// |W_n⟩ → |W_2n⟩, expanding w_1..w_n in ascending order.
pub fn double_w(plan: &DoublingPlan, noise: &NoiseParams) -> Result<DoublingOutcome> {
    let n = plan.n;
    let circuit = ExpansionCircuit::with_noise(noise);
    let w = build_w_state(n)?;
    let mut ancillas_log = Vec::with_capacity(n);
    let mut discarded_weight = 0.0;

    let (register, ancillas, peak_qubits) = match plan.mode {
        DoublingMode::Block => {
            let reg = w.tensor(&StateVector::zeros(2 * n)?)?;
            let layout = interleave_permutation(n);
            let mut reg = reg.permute(&layout)?;
            // every triple owns its ancilla here, so both schedules apply
            // O^⊗n as the same product of per-triple factors
            for i in 0..n {
                circuit.apply(&mut reg, 3 * i, 3 * i + 1, 3 * i + 2)?;
                ancillas_log.push(ancilla_record(&reg, 3 * i + 1, i)?);
            }
            let reg = reg.permute(&layout.inverse())?;
            (reg, (2 * n..3 * n).collect::<Vec<_>>(), 3 * n)
        }
        DoublingMode::Sequential => match plan.schedule {
            Schedule::ParallelAncilla => {
                let mut reg = w.tensor(&StateVector::zeros(2 * n)?)?;
                for i in 0..n {
                    circuit.apply(&mut reg, i, 2 * n + i, n + i)?;
                    ancillas_log.push(ancilla_record(&reg, 2 * n + i, i)?);
                }
                (reg, (2 * n..3 * n).collect(), 3 * n)
            }
            Schedule::SerialAncilla => {
                let mut reg = w.tensor(&StateVector::zeros(n + 1)?)?;
                let mut anc = 2 * n;
                let mut ancillas = alloc::vec![anc];
                for i in 0..n {
                    circuit.apply(&mut reg, i, anc, n + i)?;
                    ancillas_log.push(ancilla_record(&reg, anc, i)?);
                    if i + 1 == n {
                        break;
                    }
                    if noise.is_ideal() {
                        // only rounding residue is removed
                        discarded_weight += reg.project_zero(anc)?;
                    } else {
                        // keep the spent ancilla as environment and bring in a
                        // fresh one: trace-and-reprepare, exactly
                        anc = reg.num_qubits();
                        reg = reg.insert_zero_qubit(anc)?;
                        ancillas.push(anc);
                    }
                }
                let peak = reg.num_qubits();
                (reg, ancillas, peak)
            }
        },
    };

    let logical: Vec<usize> = (0..2 * n).collect();
    let target = build_w_state(2 * n)?;
    let phi = register.contract(&logical, &target)?;
    let fidelity = phi[0].norm_sqr().min(1.0);
    let reduced_fidelity = phi.iter().map(|a| a.norm_sqr()).sum::<f64>().min(1.0);

    Ok(DoublingOutcome {
        register,
        logical,
        ancillas,
        report: RunReport {
            n,
            mode: plan.mode,
            schedule: plan.schedule,
            fidelity,
            reduced_fidelity,
            ancillas: ancillas_log,
            discarded_weight,
            peak_qubits,
            wall_time: None,
        },
    })
}
