//! Fidelity of the doubled W state under coherent gate imperfections.
//!
//! Hadamards become H(α) = R(π/4 − α), T′ gates become T′(β) = R(π/8 − β) and
//! controlled-Z gates become CP(γ). The closed forms below are checked
//! against brute-force simulation of the doubling protocol.
//!
//! Two simulated fidelities are available. The post-selected overlap
//! |⟨W_2n, 0_anc|ψ⟩|² treats the ancillas as returned to their initial state
//! and reproduces the closed forms for every n. The reduced-density fidelity
//! ⟨W_2n|tr_anc ρ|W_2n⟩ additionally credits the branch where an ancilla is
//! left excited, which adds a term that shrinks as 1/n. Records use the
//! post-selected overlap ([`CALIBRATED_DEFINITION`]).

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8, PI, SQRT_2};

use libm::{cos, sin};

use crate::wcircuit::{double_w, DoublingMode, DoublingPlan, Schedule, BLOCK_MAX_N};
use crate::{Error, Result, C64};

/// Angle errors (radians) shared by every gate instance of each type.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseParams {
    /// Hadamard angle error.
    pub alpha: f64,
    /// T′ angle error.
    pub beta: f64,
    /// Controlled-phase error.
    pub gamma: f64,
}

impl NoiseParams {
    pub const IDEAL: NoiseParams = NoiseParams {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// α = β = γ = `theta`.
    pub fn uniform(theta: f64) -> Self {
        Self::new(theta, theta, theta)
    }

    pub fn is_ideal(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0 && self.gamma == 0.0
    }
}

/// Upper end of the default sweep window.
pub const DEFAULT_THETA_MAX: f64 = PI / 60.0;
pub const DEFAULT_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FidelityKind {
    H,
    Tp,
    Cp,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FidelityDefinition {
    PostSelectedOverlap,
    ReducedDensity,
}

/// The definition that matches the closed forms.
pub const CALIBRATED_DEFINITION: FidelityDefinition = FidelityDefinition::PostSelectedOverlap;

pub fn f_h(alpha: f64) -> f64 {
    let c = cos(2.0 * alpha);
    let v = 0.5 + 0.5 * c * c * c;
    v * v
}

pub fn f_tp(beta: f64) -> f64 {
    let x = (PI + 8.0 * beta) / 4.0;
    let v = FRAC_1_SQRT_2 * (cos(x) + sin(x));
    v * v
}

pub fn f_cp(gamma: f64) -> f64 {
    let c2 = cos(gamma / 2.0);
    let (c8, s8) = (cos(FRAC_PI_8), sin(FRAC_PI_8));
    let a = C64::from_polar(0.5 * c2 * c2 * c2 * c2, -2.0 * gamma);
    let b = (C64::new(c8 * c8, 0.0) - C64::from_polar(s8 * s8, -gamma)) * FRAC_1_SQRT_2;
    (a + b).norm_sqr()
}

pub fn f_combined(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let e = C64::from_polar(1.0, gamma);
    let one = C64::new(1.0, 0.0);
    let x = (PI + 8.0 * beta) / 4.0;
    let c2a = cos(2.0 * alpha);
    let p = one + e;
    let p4 = p * p * p * p;
    let first =
        C64::from_polar(1.0, -4.0 * gamma) * p4 * (c2a * c2a * c2a * cos(x)) / (16.0 * SQRT_2);
    let second = C64::from_polar(1.0, -gamma) * (-one + e + p * sin(x)) / (2.0 * SQRT_2);
    (first + second).norm_sqr()
}

/// Closed-form fidelity; single-gate kinds read only their own parameter.
pub fn fidelity_closed_form(which: FidelityKind, params: &NoiseParams) -> f64 {
    match which {
        FidelityKind::H => f_h(params.alpha),
        FidelityKind::Tp => f_tp(params.beta),
        FidelityKind::Cp => f_cp(params.gamma),
        FidelityKind::Combined => f_combined(params.alpha, params.beta, params.gamma),
    }
}

/// Runs the doubling protocol with imperfect gates and scores it against
/// |W_2n⟩. Block mode is used up to its cap, sequential beyond.
pub fn simulate_noisy_fidelity(
    n: usize,
    params: &NoiseParams,
    definition: FidelityDefinition,
) -> Result<f64> {
    let mode = if n <= BLOCK_MAX_N {
        DoublingMode::Block
    } else {
        DoublingMode::Sequential
    };
    let plan = DoublingPlan::new(n, mode, Schedule::SerialAncilla)?;
    let report = double_w(&plan, params)?.report;
    Ok(match definition {
        FidelityDefinition::PostSelectedOverlap => report.fidelity,
        FidelityDefinition::ReducedDensity => report.reduced_fidelity,
    })
}

/// Worst |closed form − simulation| per definition over a set of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub post_selected_max_dev: f64,
    pub reduced_max_dev: f64,
    pub chosen: FidelityDefinition,
}

pub fn calibrate(n: usize, points: &[NoiseParams]) -> Result<Calibration> {
    let (mut ps, mut red) = (0.0f64, 0.0f64);
    for p in points {
        let closed = f_combined(p.alpha, p.beta, p.gamma);
        ps = ps.max(
            (simulate_noisy_fidelity(n, p, FidelityDefinition::PostSelectedOverlap)? - closed)
                .abs(),
        );
        red = red.max(
            (simulate_noisy_fidelity(n, p, FidelityDefinition::ReducedDensity)? - closed).abs(),
        );
    }
    let chosen = if ps <= red {
        FidelityDefinition::PostSelectedOverlap
    } else {
        FidelityDefinition::ReducedDensity
    };
    Ok(Calibration {
        post_selected_max_dev: ps,
        reduced_max_dev: red,
        chosen,
    })
}

/// One point of the imperfection sweep at shared parameter Θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityRecord {
    pub theta: f64,
    pub f_h: f64,
    pub f_tp: f64,
    pub f_cp: f64,
    pub f_combined: f64,
    /// Simulated fidelity with α = β = γ = Θ.
    pub f_simulated: f64,
    pub n: usize,
}

/// Θ_k = theta_max·k/(steps − 1), landing exactly on theta_max at the end.
/// The three single-gate series isolate one parameter each; the combined
/// series and the simulation set all three.
pub fn sweep(theta_max: f64, steps: usize, n: usize) -> Result<Vec<FidelityRecord>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "sweep needs at least 2 steps, got {steps}"
        )));
    }
    if !theta_max.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "theta_max must be finite, got {theta_max}"
        )));
    }
    (0..steps)
        .map(|k| sweep_point(theta_max * (k as f64 / (steps - 1) as f64), n))
        .collect()
}

pub fn sweep_point(theta: f64, n: usize) -> Result<FidelityRecord> {
    Ok(FidelityRecord {
        theta,
        f_h: f_h(theta),
        f_tp: f_tp(theta),
        f_cp: f_cp(theta),
        f_combined: f_combined(theta, theta, theta),
        f_simulated: simulate_noisy_fidelity(
            n,
            &NoiseParams::uniform(theta),
            CALIBRATED_DEFINITION,
        )?,
        n,
    })
}
