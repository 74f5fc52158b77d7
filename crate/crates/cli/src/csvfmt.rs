//! Fixed-format CSV writers. Floats carry 17 significant digits so that
//! every value round-trips and identical runs give identical bytes.

use std::fmt::Write;

use wstate_core::cavity::CavityRecord;
use wstate_core::{FidelityRecord, QubitRole, StateVector};

/// Amplitudes with modulus at or below this are left out of state dumps.
pub const DUMP_CUTOFF: f64 = 1e-14;

pub fn float(v: f64) -> String {
    // fold −0.0 so sign noise does not leak into the output
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub const STATE_HEADER: &str = "index,bits,label,re,im";
pub const FIDELITY_HEADER: &str = "theta,f_h,f_tp,f_cp,f_combined,f_simulated,n";
pub const CAVITY_HEADER: &str = "detuning,g_ratio,re_r,im_r,phi,phi_0,cz_pass";

pub fn state_csv(state: &StateVector, role: QubitRole) -> String {
    let k = state.num_qubits();
    let mut out = String::from(STATE_HEADER);
    out.push('\n');
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm() <= DUMP_CUTOFF {
            continue;
        }
        let bits: String = (0..k)
            .map(|q| if i >> (k - 1 - q) & 1 == 1 { '1' } else { '0' })
            .collect();
        writeln!(
            out,
            "{i},{bits},{},{},{}",
            role.label_basis(i, k),
            float(a.re),
            float(a.im)
        )
        .unwrap();
    }
    out
}

pub fn fidelity_csv(records: &[FidelityRecord]) -> String {
    let mut out = String::from(FIDELITY_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            float(r.theta),
            float(r.f_h),
            float(r.f_tp),
            float(r.f_cp),
            float(r.f_combined),
            float(r.f_simulated),
            r.n
        )
        .unwrap();
    }
    out
}

pub fn cavity_csv(records: &[CavityRecord]) -> String {
    let mut out = String::from(CAVITY_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            float(r.detuning),
            float(r.g_ratio),
            float(r.r.re),
            float(r.r.im),
            float(r.phases.phi),
            float(r.phases.phi_0),
            r.cz_pass
        )
        .unwrap();
    }
    out
}
