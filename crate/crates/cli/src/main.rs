use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wstate_cli::commands;
use wstate_cli::config::{ModeArg, RoleArg, ScheduleArg};
use wstate_cli::verify::{run_verify, VerifyOptions};
use wstate_cli::{CliError, CliResult, RunConfig};
use wstate_core::NoiseParams;

#[derive(Parser, Debug)]
#[command(
    name = "wstate",
    version,
    about = "Deterministic W-state preparation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every built-in check and report the worst deviation of each
    Verify(VerifyArgs),
    /// Double |W_n> and dump the amplitudes of |W_2n>
    Prepare(PrepareArgs),
    /// Closed-form and simulated fidelities over a shared imperfection angle
    FidelitySweep(FidelityArgs),
    /// Reflection coefficients and CZ validity over detuning and coupling
    CavitySweep(CavityArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// TOML file with defaults; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,

    /// Offset every T' angle in the expansion circuit (harness self-test)
    #[arg(long, hide = true)]
    fault_tprime: Option<f64>,
}

#[derive(Args, Debug)]
struct PrepareArgs {
    #[command(flatten)]
    common: Common,

    /// Size of the input W state
    #[arg(long)]
    n: Option<usize>,

    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,

    /// Physical labels for the rendering and the dump
    #[arg(long, value_enum)]
    role: Option<RoleArg>,
}

#[derive(Args, Debug)]
struct FidelityArgs {
    #[command(flatten)]
    common: Common,

    /// Register size used for the simulated column
    #[arg(long)]
    n: Option<usize>,

    /// Largest imperfection angle in radians [default: pi/60]
    #[arg(long)]
    theta_max: Option<f64>,

    /// Number of sweep points, endpoints included [default: 200]
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args, Debug)]
struct CavityArgs {
    #[command(flatten)]
    common: Common,

    /// Largest cavity-photon detuning, in units of kappa [default: 10]
    #[arg(long)]
    detuning_max: Option<f64>,

    #[arg(long)]
    detuning_steps: Option<usize>,

    /// Largest g / sqrt(kappa gamma) [default: 10]
    #[arg(long)]
    g_max: Option<f64>,

    #[arg(long)]
    g_steps: Option<usize>,

    #[arg(long)]
    kappa: Option<f64>,

    #[arg(long)]
    gamma_decay: Option<f64>,
}

fn resolve(common: &Common, flags: RunConfig) -> CliResult<RunConfig> {
    let file = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    Ok(file.overridden_by(RunConfig {
        out: common.out.clone(),
        ..flags
    }))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Verify(args) => {
            let cfg = resolve(&args.common, RunConfig::default())?;
            let options = VerifyOptions {
                circuit_noise: NoiseParams::new(0.0, args.fault_tprime.unwrap_or(0.0), 0.0),
            };
            let report = run_verify(&options);
            emit(cfg.out.as_deref(), &report.render())?;
            if let Some(failed) = report.first_failure() {
                eprintln!(
                    "verify failed: first failure '{}' (max dev {:.3e}, tolerance {:.0e})",
                    failed.name, failed.max_deviation, failed.tolerance
                );
                return Ok(ExitCode::from(1));
            }
        }
        Command::Prepare(args) => {
            let cfg = resolve(
                &args.common,
                RunConfig {
                    n: args.n,
                    mode: args.mode,
                    schedule: args.schedule,
                    role: args.role,
                    ..Default::default()
                },
            )?;
            let output = commands::prepare(&cfg)?;
            emit(cfg.out.as_deref(), &output.csv)?;
            let summary = commands::prepare_summary(&output);
            if cfg.out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
        }
        Command::FidelitySweep(args) => {
            let cfg = resolve(
                &args.common,
                RunConfig {
                    n: args.n,
                    theta_max: args.theta_max,
                    steps: args.steps,
                    ..Default::default()
                },
            )?;
            emit(cfg.out.as_deref(), &commands::fidelity_sweep(&cfg)?)?;
        }
        Command::CavitySweep(args) => {
            let cfg = resolve(
                &args.common,
                RunConfig {
                    detuning_max: args.detuning_max,
                    detuning_steps: args.detuning_steps,
                    g_max: args.g_max,
                    g_steps: args.g_steps,
                    kappa: args.kappa,
                    gamma_decay: args.gamma_decay,
                    ..Default::default()
                },
            )?;
            emit(cfg.out.as_deref(), &commands::cavity_sweep(&cfg)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
