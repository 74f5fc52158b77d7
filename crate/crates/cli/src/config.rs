//! Run parameters from a TOML file and command-line flags.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;
use wstate_core::{DoublingMode, QubitRole, Schedule};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Block,
    Sequential,
}

impl From<ModeArg> for DoublingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Block => DoublingMode::Block,
            ModeArg::Sequential => DoublingMode::Sequential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleArg {
    Serial,
    Parallel,
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Serial => Schedule::SerialAncilla,
            ScheduleArg::Parallel => Schedule::ParallelAncilla,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RoleArg {
    Photon,
    Spin,
}

impl From<RoleArg> for QubitRole {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Photon => QubitRole::Photonic,
            RoleArg::Spin => QubitRole::Spin,
        }
    }
}

/// Every field is optional; unset fields fall back to the defaults exposed by
/// the accessor methods.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub out: Option<PathBuf>,
    pub n: Option<usize>,
    pub mode: Option<ModeArg>,
    pub schedule: Option<ScheduleArg>,
    pub role: Option<RoleArg>,
    pub theta_max: Option<f64>,
    pub steps: Option<usize>,
    pub detuning_max: Option<f64>,
    pub detuning_steps: Option<usize>,
    pub g_max: Option<f64>,
    pub g_steps: Option<usize>,
    pub kappa: Option<f64>,
    pub gamma_decay: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| CliError::Config {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overridden_by(self, flags: RunConfig) -> RunConfig {
        RunConfig {
            out: flags.out.or(self.out),
            n: flags.n.or(self.n),
            mode: flags.mode.or(self.mode),
            schedule: flags.schedule.or(self.schedule),
            role: flags.role.or(self.role),
            theta_max: flags.theta_max.or(self.theta_max),
            steps: flags.steps.or(self.steps),
            detuning_max: flags.detuning_max.or(self.detuning_max),
            detuning_steps: flags.detuning_steps.or(self.detuning_steps),
            g_max: flags.g_max.or(self.g_max),
            g_steps: flags.g_steps.or(self.g_steps),
            kappa: flags.kappa.or(self.kappa),
            gamma_decay: flags.gamma_decay.or(self.gamma_decay),
        }
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(2)
    }

    pub fn mode(&self) -> DoublingMode {
        self.mode.unwrap_or(ModeArg::Block).into()
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule.unwrap_or(ScheduleArg::Serial).into()
    }

    pub fn role(&self) -> QubitRole {
        self.role.unwrap_or(RoleArg::Photon).into()
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max.unwrap_or(PI / 60.0)
    }

    pub fn steps(&self) -> usize {
        self.steps.unwrap_or(200)
    }

    pub fn detuning_max(&self) -> f64 {
        self.detuning_max.unwrap_or(10.0)
    }

    pub fn detuning_steps(&self) -> usize {
        self.detuning_steps.unwrap_or(11)
    }

    pub fn g_max(&self) -> f64 {
        self.g_max.unwrap_or(10.0)
    }

    pub fn g_steps(&self) -> usize {
        self.g_steps.unwrap_or(101)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa.unwrap_or(1.0)
    }

    pub fn gamma_decay(&self) -> f64 {
        self.gamma_decay.unwrap_or(1.0)
    }
}
