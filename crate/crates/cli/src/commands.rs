//! Command bodies. Each returns its CSV text and a human-readable summary;
//! writing them out is left to the caller.

use std::time::Instant;

use wstate_core::cavity::{self, linspace, CzThresholds};
use wstate_core::noise;
use wstate_core::wcircuit::{build_w_state, double_w, relabel};
use wstate_core::{DoublingPlan, NoiseParams, RunReport};

use crate::config::RunConfig;
use crate::csvfmt;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct PrepareOutput {
    pub csv: String,
    pub rendering: String,
    pub fidelity: f64,
    pub report: RunReport,
}

/// Doubles |W_n⟩ with ideal gates and dumps the 2n logical qubits.
pub fn prepare(cfg: &RunConfig) -> CliResult<PrepareOutput> {
    let plan = DoublingPlan::new(cfg.n(), cfg.mode(), cfg.schedule())?;
    let start = Instant::now();
    let outcome = double_w(&plan, &NoiseParams::IDEAL)?;
    let elapsed = start.elapsed();
    let logical = outcome.logical_state()?;
    let fidelity = outcome.post_selected_fidelity(&build_w_state(2 * plan.n())?)?;
    let mut report = outcome.report;
    report.wall_time = Some(elapsed);
    Ok(PrepareOutput {
        csv: csvfmt::state_csv(&logical, cfg.role()),
        rendering: relabel(&logical, cfg.role()).rendering(),
        fidelity,
        report,
    })
}

pub fn prepare_summary(out: &PrepareOutput) -> String {
    let r = &out.report;
    format!(
        "W_{} from W_{} ({} mode, {} ancilla schedule, {} qubits peak)\n{}\nfidelity {:.16}\nwall time {:.3} ms\n",
        2 * r.n,
        r.n,
        r.mode.name(),
        r.schedule.name(),
        r.peak_qubits,
        out.rendering,
        out.fidelity,
        r.wall_time.unwrap_or_default().as_secs_f64() * 1e3,
    )
}

pub fn fidelity_sweep(cfg: &RunConfig) -> CliResult<String> {
    let records = noise::sweep(cfg.theta_max(), cfg.steps(), cfg.n())?;
    Ok(csvfmt::fidelity_csv(&records))
}

/// Detuning from 0 to `detuning_max`, g/√(κγ) from 0 to `g_max`.
pub fn cavity_sweep(cfg: &RunConfig) -> CliResult<String> {
    if cfg.detuning_steps() == 0 || cfg.g_steps() == 0 {
        return Err(CliError::Argument("grid sizes must be positive".into()));
    }
    let detunings = linspace(0.0, cfg.detuning_max(), cfg.detuning_steps());
    let g_ratios = linspace(0.0, cfg.g_max(), cfg.g_steps());
    let records = cavity::sweep(
        &detunings,
        &g_ratios,
        cfg.kappa(),
        cfg.gamma_decay(),
        &CzThresholds::default(),
    )?;
    Ok(csvfmt::cavity_csv(&records))
}
