//! Gate constructors.
//!
//! Every single-qubit gate used by the expansion circuit is a real reflection
//! `[[cos θ, sin θ], [sin θ, −cos θ]]`; Hadamard sits at θ = π/4 and T′ at
//! θ = π/8. Imperfect gates shift θ, and an imperfect controlled-Z picks up a
//! phase error on |11⟩.

use alloc::format;
use alloc::string::{String, ToString};
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use libm::{cos, sin, sqrt};

use crate::{Error, Result, ALGEBRAIC_TOL, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense matrix of a one- or two-qubit gate.
///
/// Two-qubit matrices are indexed by `2a + b` for the basis state |a b⟩, where
/// `a` is the first qubit the gate is applied to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateMatrix {
    One([[C64; 2]; 2]),
    Two([[C64; 4]; 4]),
}

impl GateMatrix {
    pub fn arity(&self) -> usize {
        match self {
            GateMatrix::One(_) => 1,
            GateMatrix::Two(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.arity()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        match self {
            GateMatrix::One(m) => m[row][col],
            GateMatrix::Two(m) => m[row][col],
        }
    }

    /// Largest entrywise deviation of U†U from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                let expected = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - expected).norm());
            }
        }
        worst
    }

    /// Largest entrywise |self − other|; `f64::INFINITY` if the arities differ.
    pub fn max_deviation(&self, other: &GateMatrix) -> f64 {
        if self.arity() != other.arity() {
            return f64::INFINITY;
        }
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.entry(i, j) - other.entry(i, j)).norm());
            }
        }
        worst
    }

    /// Deviation between two matrices after removing a global phase.
    ///
    /// The phase is fixed by the largest-magnitude entry of `other`.
    pub fn max_deviation_up_to_phase(&self, other: &GateMatrix) -> f64 {
        if self.arity() != other.arity() {
            return f64::INFINITY;
        }
        let d = self.dim();
        let (mut bi, mut bj, mut best) = (0, 0, -1.0);
        for i in 0..d {
            for j in 0..d {
                let m = other.entry(i, j).norm();
                if m > best {
                    best = m;
                    bi = i;
                    bj = j;
                }
            }
        }
        let a = self.entry(bi, bj);
        let b = other.entry(bi, bj);
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return self.max_deviation(other);
        }
        // rotate self so that the reference entries share a phase
        let phase = (b / a) / (b / a).norm();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.entry(i, j) * phase - other.entry(i, j)).norm());
            }
        }
        worst
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &GateMatrix) -> Result<GateMatrix> {
        match (self, rhs) {
            (GateMatrix::One(a), GateMatrix::One(b)) => Ok(GateMatrix::One(matmul(a, b))),
            (GateMatrix::Two(a), GateMatrix::Two(b)) => Ok(GateMatrix::Two(matmul(a, b))),
            _ => Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            }),
        }
    }

    pub fn adjoint(&self) -> GateMatrix {
        match self {
            GateMatrix::One(m) => GateMatrix::One(adjoint(m)),
            GateMatrix::Two(m) => GateMatrix::Two(adjoint(m)),
        }
    }
}

fn matmul<const N: usize>(a: &[[C64; N]; N], b: &[[C64; N]; N]) -> [[C64; N]; N] {
    let mut out = [[ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut acc = ZERO;
            for k in 0..N {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn adjoint<const N: usize>(a: &[[C64; N]; N]) -> [[C64; N]; N] {
    let mut out = [[ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// A labelled one- or two-qubit unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    matrix: GateMatrix,
    label: String,
}

impl Gate {
    /// Wraps a matrix, rejecting it if U†U deviates from I by more than 1e-12.
    pub fn new(matrix: GateMatrix, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let deviation = matrix.unitarity_deviation();
        if deviation.is_nan() || deviation > ALGEBRAIC_TOL {
            return Err(Error::NonUnitary { label, deviation });
        }
        Ok(Self { matrix, label })
    }

    /// Wraps a matrix without checking unitarity. Gate kernels still validate
    /// it before use.
    pub fn new_unchecked(matrix: GateMatrix, label: impl Into<String>) -> Self {
        Self {
            matrix,
            label: label.into(),
        }
    }

    pub fn matrix(&self) -> &GateMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arity(&self) -> usize {
        self.matrix.arity()
    }

    pub fn is_unitary(&self) -> bool {
        self.matrix.unitarity_deviation() <= ALGEBRAIC_TOL
    }

    pub(crate) fn single(&self) -> Option<&[[C64; 2]; 2]> {
        match &self.matrix {
            GateMatrix::One(m) => Some(m),
            GateMatrix::Two(_) => None,
        }
    }

    pub(crate) fn double(&self) -> Option<&[[C64; 4]; 4]> {
        match &self.matrix {
            GateMatrix::Two(m) => Some(m),
            GateMatrix::One(_) => None,
        }
    }
}

fn reflection_matrix(theta: f64) -> GateMatrix {
    let (c, s) = (cos(theta), sin(theta));
    GateMatrix::One([
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [C64::new(s, 0.0), C64::new(-c, 0.0)],
    ])
}

/// The real reflection `[[cos θ, sin θ], [sin θ, −cos θ]]`.
pub fn rotation_gate(theta: f64) -> Gate {
    Gate::new_unchecked(reflection_matrix(theta), format!("R({theta})"))
}

pub fn hadamard() -> Gate {
    Gate::new_unchecked(reflection_matrix(FRAC_PI_4), "H")
}

pub fn t_prime() -> Gate {
    Gate::new_unchecked(reflection_matrix(FRAC_PI_8), "T'")
}

/// Hadamard with angle error α: `rotation_gate(π/4 − α)`.
pub fn imperfect_hadamard(alpha: f64) -> Gate {
    if alpha == 0.0 {
        return hadamard();
    }
    Gate::new_unchecked(reflection_matrix(FRAC_PI_4 - alpha), format!("H({alpha})"))
}

/// T′ with angle error β: `rotation_gate(π/8 − β)`.
pub fn imperfect_t_prime(beta: f64) -> Gate {
    if beta == 0.0 {
        return t_prime();
    }
    Gate::new_unchecked(reflection_matrix(FRAC_PI_8 - beta), format!("T'({beta})"))
}

/// `diag(1, 1, 1, e^{i(π−γ)})`; γ = 0 is the ideal controlled-Z.
pub fn controlled_phase(gamma: f64) -> Gate {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = ONE;
    m[2][2] = ONE;
    m[3][3] = if gamma == 0.0 {
        C64::new(-1.0, 0.0)
    } else {
        C64::from_polar(1.0, PI - gamma)
    };
    let label = if gamma == 0.0 {
        "CZ".to_string()
    } else {
        format!("CP({gamma})")
    };
    Gate::new_unchecked(GateMatrix::Two(m), label)
}

pub fn cz() -> Gate {
    controlled_phase(0.0)
}

pub fn pauli_z() -> Gate {
    Gate::new_unchecked(
        GateMatrix::One([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]]),
        "Z",
    )
}

pub fn identity() -> Gate {
    Gate::new_unchecked(GateMatrix::One([[ONE, ZERO], [ZERO, ONE]]), "I")
}

/// Half-wave plate at physical plate angle `a`.
///
/// A plate at angle `a` rotates polarization by `2a`, so this is
/// `rotation_gate(2a)`: π/8 gives Hadamard and π/16 gives T′.
pub fn hwp_gate(plate_angle: f64) -> Gate {
    Gate::new_unchecked(
        reflection_matrix(2.0 * plate_angle),
        format!("HWP({plate_angle})"),
    )
}

/// Parameters of a cyclic, non-adiabatic holonomic gate driven through an
/// excited state `|e⟩` coupled to both `|−⟩` and `|+⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomicParams {
    /// Mixing angle setting the relative drive strength of the two tones.
    pub theta: f64,
    /// Relative phase between the two tones.
    pub phi: f64,
    /// Detuning over Rabi frequency, Δ/Ω.
    pub delta_over_omega: f64,
}

impl HolonomicParams {
    pub fn new(theta: f64, phi: f64, delta_over_omega: f64) -> Self {
        Self {
            theta,
            phi,
            delta_over_omega,
        }
    }

    /// γ = π(1 − Δ/√(Ω² + Δ²)), which lies in (0, 2π) for finite Δ/Ω.
    pub fn geometric_phase(&self) -> f64 {
        let r = self.delta_over_omega;
        PI * (1.0 - r / sqrt(1.0 + r * r))
    }

    /// Pulse duration τ = 2π/√(Ω² + Δ²) for Rabi frequency `omega`.
    pub fn pulse_duration(&self, omega: f64) -> f64 {
        let delta = self.delta_over_omega * omega;
        2.0 * PI / sqrt(omega * omega + delta * delta)
    }

    fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.phi.is_finite() && self.delta_over_omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "holonomic parameters must be finite: {self:?}"
            )));
        }
        Ok(())
    }
}

/// `|d⟩⟨d| + e^{iγ}|b⟩⟨b|` in the ordered basis (|−⟩, |+⟩), where
/// `|b⟩ = sin(θ/2)|−⟩ − e^{iφ}cos(θ/2)|+⟩` is the bright state and
/// `|d⟩ = cos(θ/2)|−⟩ + e^{iφ}sin(θ/2)|+⟩` the dark state orthogonal to it.
pub fn holonomic_gate(p: HolonomicParams) -> Result<Gate> {
    p.validate()?;
    let (s, c) = (sin(p.theta / 2.0), cos(p.theta / 2.0));
    let e_phi = C64::from_polar(1.0, p.phi);
    let bright = [C64::new(s, 0.0), -e_phi * c];
    let dark = [C64::new(c, 0.0), e_phi * s];
    let phase = C64::from_polar(1.0, p.geometric_phase());
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = dark[i] * dark[j].conj() + phase * bright[i] * bright[j].conj();
        }
    }
    Gate::new(
        GateMatrix::One(m),
        format!("U({}, {}, {})", p.theta, p.phi, p.delta_over_omega),
    )
}
