//! Spin–cavity reflection model behind the photon–spin CZ gate.
//!
//! A photon reflected off a cavity picks up the phase of r(ω_p) when the
//! emitter couples to the mode and of r_0(ω_p) when it does not. At resonance
//! with strong coupling these are 0 and π, which a π phase shifter turns
//! into a controlled-Z between the photon polarization and the spin.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::sqrt;

use crate::{Error, Result, C64};

/// Frequencies and rates in one shared unit; only differences and ratios
/// enter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Incident photon frequency.
    pub omega_p: f64,
    /// Cavity mode frequency.
    pub omega_c: f64,
    /// Emitter transition frequency.
    pub omega_0: f64,
    /// Emitter–cavity coupling.
    pub g: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Emitter decay rate.
    pub gamma_decay: f64,
}

impl CavityParams {
    pub fn new(
        omega_p: f64,
        omega_c: f64,
        omega_0: f64,
        g: f64,
        kappa: f64,
        gamma_decay: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_p,
            omega_c,
            omega_0,
            g,
            kappa,
            gamma_decay,
        };
        p.validate()?;
        Ok(p)
    }

    /// ω_p = ω_C = ω_0 = 0.
    pub fn resonant(g: f64, kappa: f64, gamma_decay: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 0.0, g, kappa, gamma_decay)
    }

    /// Cavity and emitter degenerate, photon detuned so that
    /// ω_C − ω_p = `detuning`; g given in units of √(κγ).
    pub fn detuned(detuning: f64, g_ratio: f64, kappa: f64, gamma_decay: f64) -> Result<Self> {
        let g = g_ratio * sqrt(kappa * gamma_decay);
        Self::new(-detuning, 0.0, 0.0, g, kappa, gamma_decay)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.omega_p,
            self.omega_c,
            self.omega_0,
            self.g,
            self.kappa,
            self.gamma_decay,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cavity parameters must be finite: {self:?}"
            )));
        }
        if self.kappa <= 0.0 || self.gamma_decay <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa and gamma_decay must be positive, got {} and {}",
                self.kappa, self.gamma_decay
            )));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling g must be non-negative, got {}",
                self.g
            )));
        }
        Ok(())
    }

    /// √(κγ), the coupling scale of the strong-coupling criterion.
    pub fn coupling_scale(&self) -> f64 {
        sqrt(self.kappa * self.gamma_decay)
    }
}

/// r(ω_p) with the emitter coupled:
/// ([i(ω_C−ω_p) − κ/2][i(ω_0−ω_p) + γ/2] + g²) /
/// ([i(ω_C−ω_p) + κ/2][i(ω_0−ω_p) + γ/2] + g²).
pub fn reflection_coupled(p: &CavityParams) -> C64 {
    let cav = p.omega_c - p.omega_p;
    let emit = C64::new(p.gamma_decay / 2.0, p.omega_0 - p.omega_p);
    let g2 = C64::new(p.g * p.g, 0.0);
    let num = C64::new(-p.kappa / 2.0, cav) * emit + g2;
    let den = C64::new(p.kappa / 2.0, cav) * emit + g2;
    num / den
}

/// r_0(ω_p) = (i(ω_C−ω_p) − κ/2) / (i(ω_C−ω_p) + κ/2).
pub fn reflection_uncoupled(p: &CavityParams) -> C64 {
    let cav = p.omega_c - p.omega_p;
    C64::new(-p.kappa / 2.0, cav) / C64::new(p.kappa / 2.0, cav)
}

/// Arguments of r and r_0, each in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub phi: f64,
    pub phi_0: f64,
}

/// arg z in (−π, π]; atan2 returns −π for negative reals with a −0.0
/// imaginary part, which is folded onto π.
fn principal_arg(z: C64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

pub fn phase_pair(p: &CavityParams) -> PhasePair {
    PhasePair {
        phi: principal_arg(reflection_coupled(p)),
        phi_0: principal_arg(reflection_uncoupled(p)),
    }
}

/// Tolerances for calling the reflection pair a CZ gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CzThresholds {
    pub phase: f64,
    pub modulus: f64,
}

impl Default for CzThresholds {
    fn default() -> Self {
        Self {
            phase: 0.01,
            modulus: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CzQuality {
    pub phases: PhasePair,
    /// Distance of φ from 0 on the circle.
    pub phi_error: f64,
    /// Distance of φ_0 from π on the circle.
    pub phi_0_error: f64,
    /// 1 − |r|.
    pub modulus_error: f64,
    pub pass: bool,
    /// g > 5√(κγ).
    pub strong_coupling: bool,
}

pub fn cz_quality(p: &CavityParams) -> CzQuality {
    cz_quality_with(p, &CzThresholds::default())
}

pub fn cz_quality_with(p: &CavityParams, t: &CzThresholds) -> CzQuality {
    let r = reflection_coupled(p);
    let phases = phase_pair(p);
    let phi_error = phases.phi.abs();
    let phi_0_error = PI - phases.phi_0.abs();
    let modulus_error = (1.0 - r.norm()).abs();
    let pass = phi_error < t.phase && phi_0_error < t.phase && modulus_error < t.modulus;
    CzQuality {
        phases,
        phi_error,
        phi_0_error,
        modulus_error,
        pass,
        strong_coupling: p.g > 5.0 * p.coupling_scale(),
    }
}

/// One point of a (detuning, g) scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityRecord {
    /// ω_C − ω_p, with ω_C = ω_0.
    pub detuning: f64,
    /// g / √(κγ).
    pub g_ratio: f64,
    pub r: C64,
    pub phases: PhasePair,
    pub cz_pass: bool,
}

/// Evaluates the model on every (detuning, g_ratio) pair, detuning-major.
pub fn sweep(
    detunings: &[f64],
    g_ratios: &[f64],
    kappa: f64,
    gamma_decay: f64,
    thresholds: &CzThresholds,
) -> Result<Vec<CavityRecord>> {
    let mut out = Vec::with_capacity(detunings.len() * g_ratios.len());
    for &detuning in detunings {
        for &g_ratio in g_ratios {
            let p = CavityParams::detuned(detuning, g_ratio, kappa, gamma_decay)?;
            let q = cz_quality_with(&p, thresholds);
            out.push(CavityRecord {
                detuning,
                g_ratio,
                r: reflection_coupled(&p),
                phases: q.phases,
                cz_pass: q.pass,
            });
        }
    }
    Ok(out)
}

/// `count` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..count)
            .map(|k| start + (end - start) * (k as f64 / (count - 1) as f64))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::atan;
    use proptest::prelude::*;

    fn res(g_ratio: f64) -> CavityParams {
        CavityParams::detuned(0.0, g_ratio, 1.0, 1.0).unwrap()
    }

    #[test]
    fn resonant_limits() {
        let p = res(0.0);
        assert_eq!(reflection_uncoupled(&p), C64::new(-1.0, 0.0));
        assert!((reflection_coupled(&p) - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(phase_pair(&p), PhasePair { phi: PI, phi_0: PI });
    }

    #[test]
    fn strong_coupling_examples() {
        let r = reflection_coupled(&res(5.0));
        assert!((r.re - 99.0 / 101.0).abs() < 1e-15 && r.im.abs() < 1e-15);
        let pp = phase_pair(&res(5.0));
        assert_eq!(pp.phi, 0.0);
        assert_eq!(pp.phi_0, PI);

        let q5 = cz_quality(&res(5.0));
        assert!(q5.pass);
        assert!((q5.modulus_error - 2.0 / 101.0).abs() < 1e-15);
        assert!(!q5.strong_coupling);
        let q10 = cz_quality(&res(10.0));
        assert!(q10.pass && q10.strong_coupling);
        assert!((q10.modulus_error - 2.0 / 401.0).abs() < 1e-15);
    }

    #[test]
    fn weak_coupling_fails() {
        // 4g² = 4κγ: r = 3/5, right sign but far from unit modulus
        let q = cz_quality(&res(1.0));
        assert_eq!(q.phases.phi, 0.0);
        assert!((q.modulus_error - 0.4).abs() < 1e-15);
        assert!(!q.pass);
        // below the sign flip
        let q = cz_quality(&res(0.25));
        assert_eq!(q.phases.phi, PI);
        assert!(!q.pass);
    }

    #[test]
    fn large_detuning_phase() {
        let p = CavityParams::detuned(100.0, 0.0, 1.0, 1.0).unwrap();
        let expected = 2.0 * atan(0.5 / 100.0);
        assert!((phase_pair(&p).phi_0 - expected).abs() < 1e-14);
    }

    #[test]
    fn unit_modulus_on_detuning_grid() {
        for d in linspace(-1000.0, 1000.0, 10_000) {
            let p = CavityParams::detuned(d, 3.0, 1.0, 0.7).unwrap();
            assert!((reflection_uncoupled(&p).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_coupling_reduces_to_uncoupled() {
        for d in linspace(-50.0, 50.0, 1001) {
            let p = CavityParams::detuned(d, 1e-8, 1.0, 1.0).unwrap();
            assert!((reflection_coupled(&p) - reflection_uncoupled(&p)).norm() < 1e-6);
        }
    }

    #[test]
    fn sign_flips_at_threshold() {
        assert!(reflection_coupled(&res(0.5)).norm() < 1e-15);
        assert!(reflection_coupled(&res(0.5 - 1e-9)).re < 0.0);
        assert!(reflection_coupled(&res(0.5 + 1e-9)).re > 0.0);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(CavityParams::resonant(1.0, 0.0, 1.0).is_err());
        assert!(CavityParams::resonant(1.0, 1.0, -1.0).is_err());
        assert!(CavityParams::resonant(-1.0, 1.0, 1.0).is_err());
        assert!(CavityParams::resonant(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn sweep_order_and_size() {
        let recs = sweep(
            &[0.0, 1.0],
            &[0.0, 5.0, 10.0],
            1.0,
            1.0,
            &CzThresholds::default(),
        )
        .unwrap();
        assert_eq!(recs.len(), 6);
        assert_eq!((recs[1].detuning, recs[1].g_ratio), (0.0, 5.0));
        assert_eq!(recs[0].r.re, -1.0);
        assert!(recs[1].cz_pass && !recs[0].cz_pass);
    }

    proptest! {
        #[test]
        fn resonance_is_real_closed_form(x in 0.0f64..100.0, kappa in 0.01f64..10.0, gam in 0.01f64..10.0) {
            let g = x * sqrt(kappa * gam);
            let p = CavityParams::resonant(g, kappa, gam).unwrap();
            let r = reflection_coupled(&p);
            let expected = (4.0 * g * g - kappa * gam) / (4.0 * g * g + kappa * gam);
            prop_assert!(r.im.abs() < 1e-15);
            prop_assert!((r.re - expected).abs() < 1e-14);
        }

        #[test]
        fn pass_region_is_monotone(g1 in 0.0f64..50.0, dg in 0.0f64..50.0) {
            if cz_quality(&res(g1)).pass {
                prop_assert!(cz_quality(&res(g1 + dg)).pass);
            }
        }

        #[test]
        fn phases_in_principal_range(d in -100.0f64..100.0, x in 0.0f64..20.0) {
            let pp = phase_pair(&CavityParams::detuned(d, x, 1.0, 1.0).unwrap());
            prop_assert!(pp.phi > -PI && pp.phi <= PI);
            prop_assert!(pp.phi_0 > -PI && pp.phi_0 <= PI);
        }
    }
}
