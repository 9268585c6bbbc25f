//! `dsm-drive`: NTF design, SNR tables and raw modulator streams for the
//! motor-drive delta-sigma toolkit.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dsm_drive::analysis::SnrMethod;

use commands::DesignMode;
use config::{Overrides, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dsm-drive",
    version,
    about = "Delta-sigma modulation for induction motor drives"
)]
struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sample rate, Hz.
    #[arg(long, global = true)]
    fs: Option<f64>,
    /// Oversampling ratio.
    #[arg(long, global = true)]
    osr: Option<usize>,
    /// Bound on the NTF gain.
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Slip value; repeat to give several.
    #[arg(long, global = true)]
    sigma: Vec<f64>,
    /// Quantizer level count.
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Reserved: nothing in the pipeline is random.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Frequency,
    Time,
}

impl From<MethodArg> for SnrMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Frequency => SnrMethod::Frequency,
            MethodArg::Time => SnrMethod::Time,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Motor admittance magnitude versus frequency for each slip.
    MotorTf,
    /// Design an NTF and write its coefficients and response.
    Design {
        #[arg(long, value_enum, default_value = "optimized")]
        mode: DesignMode,
    },
    /// SNR of every NTF at every slip.
    Table {
        #[arg(long, value_enum, default_value = "frequency")]
        method: MethodArg,
    },
    /// Steady-state slip at nominal supply under a constant load.
    SteadyState {
        /// Load torque, N*m.
        #[arg(long, default_value_t = 0.0)]
        load: f64,
    },
    /// Raw modulator input, output, error and motor current streams.
    Simulate {
        /// NTF JSON as written by `design`; the standard NTF when absent.
        #[arg(long)]
        ntf: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let overrides = Overrides {
        out: cli.out,
        fs: cli.fs,
        osr: cli.osr,
        gamma: cli.gamma,
        sigmas: cli.sigma,
        levels: cli.levels,
        seed: cli.seed,
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::MotorTf => commands::motor_tf(cfg),
        Command::Design { mode } => commands::design(cfg, mode),
        Command::Table { method } => commands::table(cfg, method.into()),
        Command::SteadyState { load } => commands::steady_state(cfg, load),
        Command::Simulate { ntf } => commands::simulate(cfg, ntf.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
