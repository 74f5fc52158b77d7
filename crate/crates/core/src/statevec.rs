//! Dense state vectors and density matrices.
//!
//! Qubit 0 is the most significant bit of a basis index: in a `k`-qubit
//! register qubit `q` lives at bit `k - 1 - q`. For the three-qubit expansion
//! operation the basis order is therefore |q1, anc, q2⟩ and |100⟩ has index 4.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use crate::gates::Gate;
use crate::{Error, Result, ALGEBRAIC_TOL, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Amplitudes below this fraction of the largest one are ignored when fixing
/// the global phase.
const PHASE_REF_REL: f64 = 1e-10;

/// Register size above which dense storage is refused (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

#[inline]
fn bit(num_qubits: usize, q: usize) -> usize {
    1 << (num_qubits - 1 - q)
}

/// Normalized complex amplitudes over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Computational basis state |index⟩.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                left: index,
                right: dim,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zeros(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Basis state from a bit string such as `"100"` (qubit 0 first).
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "invalid bit character {other:?}"
                    )))
                }
            }
        }
        Self::basis(bits.len(), index)
    }

    /// Takes ownership of amplitudes that must already be normalized to 1e-10.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps);
        if norm.is_nan() || norm <= 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        let scale = 1.0 / sqrt(norm);
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_size(self.num_qubits + other.num_qubits)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        })
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(ZERO, |acc, (a, b)| acc + a.conj() * b))
    }

    /// Largest |a_i − b_i| over all amplitudes.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Deviation after aligning global phases.
    pub fn max_deviation_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        self.check_same_dim(other)?;
        let ovl = self.inner(other)?;
        if ovl.norm() == 0.0 {
            return self.max_deviation(other);
        }
        let phase = ovl / ovl.norm();
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(0.0f64, |m, (a, b)| m.max((a * phase - b).norm())))
    }

    /// Rotates the global phase so that the first non-negligible amplitude is
    /// real and positive.
    pub fn normalize_phase(&mut self) {
        let max = self.amps.iter().fold(0.0f64, |m, a| m.max(a.norm()));
        if max == 0.0 {
            return;
        }
        if let Some(first) = self.amps.iter().find(|a| a.norm() > PHASE_REF_REL * max) {
            let phase = first.conj() / first.norm();
            self.amps.iter_mut().for_each(|a| *a *= phase);
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_same_dim(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Applies a single-qubit gate: I ⊗ … ⊗ U ⊗ … ⊗ I.
    pub fn apply_1q(&mut self, gate: &Gate, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        let m = single_matrix(gate)?;
        let stride = bit(self.num_qubits, target);
        let dim = self.dim();
        let mut base = 0;
        while base < dim {
            for j in base..base + stride {
                let a0 = self.amps[j];
                let a1 = self.amps[j + stride];
                self.amps[j] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += 2 * stride;
        }
        Ok(())
    }

    /// Applies `gate` to `target` on the subspace where `control` is |1⟩.
    pub fn apply_controlled(&mut self, gate: &Gate, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::DuplicateQubit(control));
        }
        let m = single_matrix(gate)?;
        let stride = bit(self.num_qubits, target);
        let cmask = bit(self.num_qubits, control);
        for j in 0..self.dim() {
            if j & stride != 0 || j & cmask == 0 {
                continue;
            }
            let a0 = self.amps[j];
            let a1 = self.amps[j | stride];
            self.amps[j] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[j | stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// Applies a two-qubit gate whose matrix is indexed by |a b⟩ with `first`
    /// as `a` and `second` as `b`.
    pub fn apply_2q(&mut self, gate: &Gate, first: usize, second: usize) -> Result<()> {
        self.check_qubit(first)?;
        self.check_qubit(second)?;
        if first == second {
            return Err(Error::DuplicateQubit(first));
        }
        let m = double_matrix(gate)?;
        let ma = bit(self.num_qubits, first);
        let mb = bit(self.num_qubits, second);
        let both = ma | mb;
        let diagonal = (0..4).all(|i| (0..4).all(|j| i == j || m[i][j] == ZERO));
        if diagonal {
            let d = [m[0][0], m[1][1], m[2][2], m[3][3]];
            for (x, a) in self.amps.iter_mut().enumerate() {
                let k = (usize::from(x & ma != 0) << 1) | usize::from(x & mb != 0);
                if d[k] != C64::new(1.0, 0.0) {
                    *a *= d[k];
                }
            }
            return Ok(());
        }
        for x in 0..self.dim() {
            if x & both != 0 {
                continue;
            }
            let idx = [x, x | mb, x | ma, x | both];
            let v = idx.map(|i| self.amps[i]);
            for (r, &i) in idx.iter().enumerate() {
                self.amps[i] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            }
        }
        Ok(())
    }

    /// Dispatches on the gate arity: one target for single-qubit gates, two
    /// for two-qubit gates.
    pub fn apply(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        match (gate.arity(), targets) {
            (1, &[t]) => self.apply_1q(gate, t),
            (2, &[a, b]) => self.apply_2q(gate, a, b),
            (arity, _) => Err(Error::ArityMismatch {
                label: gate.label().into(),
                arity,
                expected: targets.len(),
            }),
        }
    }

    /// Reorders qubits according to `perm` (qubit at position `i` moves to
    /// position `perm.map()[i]`).
    pub fn permute(&self, perm: &QubitPermutation) -> Result<StateVector> {
        if perm.len() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                left: perm.len(),
                right: self.num_qubits,
            });
        }
        let k = self.num_qubits;
        let moves: Vec<(usize, usize)> = (0..k)
            .map(|q| (bit(k, q), bit(k, perm.map[q])))
            .filter(|(from, to)| from != to)
            .collect();
        if moves.is_empty() {
            return Ok(self.clone());
        }
        let fixed: usize = (0..k)
            .filter(|&q| perm.map[q] == q)
            .map(|q| bit(k, q))
            .sum();
        let mut out = vec![ZERO; self.dim()];
        for (x, a) in self.amps.iter().enumerate() {
            let mut y = x & fixed;
            for &(from, to) in &moves {
                if x & from != 0 {
                    y |= to;
                }
            }
            out[y] = *a;
        }
        Ok(StateVector {
            num_qubits: k,
            amps: out,
        })
    }

    /// 2×2 reduced density matrix of a single qubit.
    pub fn reduced_qubit(&self, q: usize) -> Result<[[C64; 2]; 2]> {
        self.check_qubit(q)?;
        let stride = bit(self.num_qubits, q);
        let mut rho = [[ZERO; 2]; 2];
        for j in 0..self.dim() {
            if j & stride != 0 {
                continue;
            }
            let a0 = self.amps[j];
            let a1 = self.amps[j | stride];
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][0] += a1 * a0.conj();
            rho[1][1] += a1 * a1.conj();
        }
        Ok(rho)
    }

    /// Errors unless qubit `q`'s reduced state is within `tol` (entrywise) of
    /// |0⟩⟨0|.
    pub fn require_zero(&self, q: usize, tol: f64) -> Result<()> {
        let rho = self.reduced_qubit(q)?;
        let dev = (rho[0][0] - C64::new(1.0, 0.0))
            .norm()
            .max(rho[0][1].norm())
            .max(rho[1][1].norm());
        if dev > tol {
            return Err(Error::NotInZeroState {
                qubit: q,
                rho00: rho[0][0].re,
                rho01: rho[0][1].norm(),
                rho11: rho[1][1].re,
            });
        }
        Ok(())
    }

    /// Inserts a fresh |0⟩ qubit so that it ends up at `position`.
    pub fn insert_zero_qubit(&self, position: usize) -> Result<StateVector> {
        if position > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: position,
                num_qubits: self.num_qubits + 1,
            });
        }
        let k = self.num_qubits + 1;
        check_size(k)?;
        // bits below the inserted one stay in place, the rest shift up by one
        let low_bits = k - 1 - position;
        let low_mask = (1usize << low_bits) - 1;
        let mut amps = vec![ZERO; 1 << k];
        for (x, a) in self.amps.iter().enumerate() {
            let y = ((x & !low_mask) << 1) | (x & low_mask);
            amps[y] = *a;
        }
        Ok(StateVector {
            num_qubits: k,
            amps,
        })
    }

    /// Zeroes every amplitude with qubit `q` in |1⟩ and returns the removed
    /// weight. No renormalization.
    pub(crate) fn project_zero(&mut self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = bit(self.num_qubits, q);
        let mut discarded = 0.0;
        for (x, a) in self.amps.iter_mut().enumerate() {
            if x & mask != 0 {
                discarded += a.norm_sqr();
                *a = ZERO;
            }
        }
        Ok(discarded)
    }

    /// Projects qubit `q` onto |0⟩ and removes it, without renormalizing.
    /// Returns the discarded |1⟩ weight alongside the shorter state.
    pub(crate) fn take_zero_slice(&self, q: usize) -> Result<(StateVector, f64)> {
        self.check_qubit(q)?;
        if self.num_qubits == 1 {
            return Err(Error::EmptyQubitSet);
        }
        let k = self.num_qubits;
        let low_bits = k - 1 - q;
        let low_mask = (1usize << low_bits) - 1;
        let qbit = 1usize << low_bits;
        let mut amps = vec![ZERO; 1 << (k - 1)];
        let mut discarded = 0.0;
        for (x, a) in self.amps.iter().enumerate() {
            if x & qbit != 0 {
                discarded += a.norm_sqr();
                continue;
            }
            let y = ((x >> 1) & !low_mask) | (x & low_mask);
            amps[y] = *a;
        }
        Ok((
            StateVector {
                num_qubits: k - 1,
                amps,
            },
            discarded,
        ))
    }

    /// Reduced density matrix on `keep`, ordered by ascending original index.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.sorted_subset(keep)?;
        let (m, dk, dr) = self.split_matrix(&keep);
        let mut rho = vec![ZERO; dk * dk];
        for i in 0..dk {
            for j in i..dk {
                let mut acc = ZERO;
                for r in 0..dr {
                    acc += m[i * dr + r] * m[j * dr + r].conj();
                }
                rho[i * dk + j] = acc;
                rho[j * dk + i] = acc.conj();
            }
        }
        Ok(DensityMatrix {
            num_qubits: keep.len(),
            entries: rho,
        })
    }

    /// Contracts the qubits `qubits` (ascending order) against `target` and
    /// returns the unnormalized vector left on the remaining qubits:
    /// `φ = (⟨target| ⊗ I) |ψ⟩`.
    ///
    /// `|φ[0]|²` is the overlap with `target ⊗ |0…0⟩` and `‖φ‖²` is
    /// `⟨target| tr_rest(|ψ⟩⟨ψ|) |target⟩`.
    pub fn contract(&self, qubits: &[usize], target: &StateVector) -> Result<Vec<C64>> {
        let keep = self.sorted_subset(qubits)?;
        if target.num_qubits != keep.len() {
            return Err(Error::DimensionMismatch {
                left: target.num_qubits,
                right: keep.len(),
            });
        }
        let (m, dk, dr) = self.split_matrix(&keep);
        let mut phi = vec![ZERO; dr];
        for k in 0..dk {
            let t = target.amps[k].conj();
            if t == ZERO {
                continue;
            }
            for (r, p) in phi.iter_mut().enumerate() {
                *p += t * m[k * dr + r];
            }
        }
        Ok(phi)
    }

    /// Pure state of the qubits in `keep` when the rest factors off.
    ///
    /// Works through the Schmidt decomposition on whichever side is smaller,
    /// so a large register with a few ancillas never builds a large density
    /// matrix. Fails with [`Error::MixedState`] if the reduced purity is at or
    /// below `1 − tol`.
    pub fn reduce_to_pure(&self, keep: &[usize], tol: f64) -> Result<StateVector> {
        let keep = self.sorted_subset(keep)?;
        let rest: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        if rest.is_empty() {
            let mut s = self.clone();
            s.normalize_phase();
            return Ok(s);
        }
        let (m, dk, dr) = self.split_matrix(&keep);

        // rest already in |0…0⟩: take the slice directly
        let slice_norm: f64 = (0..dk).map(|k| m[k * dr].norm_sqr()).sum();
        if 1.0 - slice_norm <= ALGEBRAIC_TOL * ALGEBRAIC_TOL {
            let mut s = StateVector::normalized((0..dk).map(|k| m[k * dr]).collect())?;
            s.normalize_phase();
            return Ok(s);
        }

        if dr <= dk {
            let rho_rest = self.partial_trace(&rest)?;
            let purity = rho_rest.purity();
            if purity.is_nan() || purity <= 1.0 - tol {
                return Err(Error::MixedState { purity, tol });
            }
            let b = rho_rest.dominant_eigenvector();
            let amps: Vec<C64> = (0..dk)
                .map(|k| (0..dr).fold(ZERO, |acc, r| acc + m[k * dr + r] * b[r].conj()))
                .collect();
            let mut s = StateVector::normalized(amps)?;
            s.normalize_phase();
            Ok(s)
        } else {
            self.partial_trace(&keep)?.extract_pure(tol)
        }
    }

    fn sorted_subset(&self, qubits: &[usize]) -> Result<Vec<usize>> {
        if qubits.is_empty() {
            return Err(Error::EmptyQubitSet);
        }
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateQubit(w[0]));
            }
        }
        for &q in &sorted {
            self.check_qubit(q)?;
        }
        Ok(sorted)
    }

    /// Reshapes amplitudes into a row-major `(keep, rest)` matrix.
    fn split_matrix(&self, keep: &[usize]) -> (Vec<C64>, usize, usize) {
        let k = self.num_qubits;
        let rest: Vec<usize> = (0..k).filter(|q| !keep.contains(q)).collect();
        let dk = 1usize << keep.len();
        let dr = 1usize << rest.len();
        let mut m = vec![ZERO; dk * dr];
        for (x, a) in self.amps.iter().enumerate() {
            let ki = gather_bits(x, k, keep);
            let ri = gather_bits(x, k, &rest);
            m[ki * dr + ri] = *a;
        }
        (m, dk, dr)
    }
}

/// Index over the sub-register `qubits` (first listed qubit most significant).
fn gather_bits(x: usize, num_qubits: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| {
        (acc << 1) | usize::from(x & bit(num_qubits, q) != 0)
    })
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::ZeroQubits);
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::InvalidParameter(format!(
            "{num_qubits} qubits exceeds the dense limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let k = len.trailing_zeros() as usize;
    check_size(k)?;
    Ok(k)
}

fn single_matrix(gate: &Gate) -> Result<&[[C64; 2]; 2]> {
    let m = gate.single().ok_or_else(|| Error::ArityMismatch {
        label: gate.label().into(),
        arity: gate.arity(),
        expected: 1,
    })?;
    check_unitary(gate)?;
    Ok(m)
}

fn double_matrix(gate: &Gate) -> Result<&[[C64; 4]; 4]> {
    let m = gate.double().ok_or_else(|| Error::ArityMismatch {
        label: gate.label().into(),
        arity: gate.arity(),
        expected: 2,
    })?;
    check_unitary(gate)?;
    Ok(m)
}

fn check_unitary(gate: &Gate) -> Result<()> {
    let deviation = gate.matrix().unitarity_deviation();
    if deviation.is_nan() || deviation > ALGEBRAIC_TOL {
        return Err(Error::NonUnitary {
            label: gate.label().into(),
            deviation,
        });
    }
    Ok(())
}

/// |⟨b|a⟩|², clamped to [0, 1].
pub fn fidelity_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(b.inner(a)?.norm_sqr().min(1.0))
}

/// ⟨target|ρ|target⟩, clamped to [0, 1].
pub fn fidelity_mixed(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    rho.expectation(target).map(|f| f.clamp(0.0, 1.0))
}

/// Hermitian, trace-one density matrix over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let d = state.dim();
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = state.amps[i] * state.amps[j].conj();
            }
        }
        Self {
            num_qubits: state.num_qubits,
            entries,
        }
    }

    /// I / 2^k.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            entries[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Self {
            num_qubits,
            entries,
        }
    }

    /// Builds from row-major entries; checks shape, Hermiticity and unit trace.
    pub fn from_entries(num_qubits: usize, entries: Vec<C64>) -> Result<Self> {
        let d = 1usize << num_qubits;
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: d * d,
            });
        }
        let rho = Self {
            num_qubits,
            entries,
        };
        let herm = rho.hermiticity_deviation();
        if herm > ALGEBRAIC_TOL {
            return Err(Error::InvalidParameter(format!(
                "density matrix not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidParameter(format!("trace {tr} != 1")));
        }
        Ok(rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i).re).sum()
    }

    /// tr(ρ²), computed as Σ|ρ_ij|² for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_deviation(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm())))
    }

    /// ⟨v|ρ|v⟩ (real part).
    pub fn expectation(&self, v: &StateVector) -> Result<f64> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            let mut row = ZERO;
            for j in 0..d {
                row += self.entry(i, j) * v.amps[j];
            }
            acc += v.amps[i].conj() * row;
        }
        Ok(acc.re)
    }

    /// Dominant eigenvector, phase-normalized so that the first nonzero
    /// amplitude is real positive. Errors if purity ≤ 1 − `tol`.
    pub fn extract_pure(&self, tol: f64) -> Result<StateVector> {
        let purity = self.purity();
        if purity.is_nan() || purity <= 1.0 - tol {
            return Err(Error::MixedState { purity, tol });
        }
        let mut s = StateVector::normalized(self.dominant_eigenvector())?;
        s.normalize_phase();
        Ok(s)
    }

    /// Power iteration on the PSD matrix, seeded with the column of the
    /// largest diagonal entry. Converges geometrically at rate λ₂/λ₁.
    pub(crate) fn dominant_eigenvector(&self) -> Vec<C64> {
        let d = self.dim();
        let start = (0..d)
            .max_by(|&a, &b| self.entry(a, a).re.total_cmp(&self.entry(b, b).re))
            .unwrap_or(0);
        let mut v: Vec<C64> = (0..d).map(|i| self.entry(i, start)).collect();
        normalize_in_place(&mut v);
        for _ in 0..1000 {
            let mut w = vec![ZERO; d];
            for (i, wi) in w.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    *wi += self.entry(i, j) * vj;
                }
            }
            if !normalize_in_place(&mut w) {
                break;
            }
            let change = w
                .iter()
                .zip(&v)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            v = w;
            if change < 1e-15 {
                break;
            }
        }
        v
    }
}

fn normalize_in_place(v: &mut [C64]) -> bool {
    let n = sqrt(norm_sqr(v));
    if n == 0.0 {
        return false;
    }
    v.iter_mut().for_each(|a| *a /= n);
    true
}

/// A bijection on qubit positions `0..k`.
///
/// `map()[i]` is the position that the qubit currently at `i` moves to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitPermutation {
    map: Vec<usize>,
}

impl QubitPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() {
                return Err(Error::InvalidPermutation(format!(
                    "target {m} out of range for {} qubits",
                    map.len()
                )));
            }
            if seen[m] {
                return Err(Error::InvalidPermutation(format!("target {m} repeated")));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            map: (0..k).collect(),
        }
    }

    /// Transposition of positions `i` and `j`.
    pub fn swap(k: usize, i: usize, j: usize) -> Result<Self> {
        if i >= k || j >= k {
            return Err(Error::QubitOutOfRange {
                index: i.max(j),
                num_qubits: k,
            });
        }
        let mut map: Vec<usize> = (0..k).collect();
        map.swap(i, j);
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &QubitPermutation) -> Result<Self> {
        if self.len() != next.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: next.len(),
            });
        }
        Ok(Self {
            map: self.map.iter().map(|&m| next.map[m]).collect(),
        })
    }
}
