use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use esdsim_cli::commands::{
    cmd_analytic, cmd_diagnose, cmd_plot, cmd_run, cmd_transpile_check, corrupted_rule,
    DiagnoseOptions, RunOptions,
};
use esdsim_cli::config::{GridSpec, ShotsSpec};
use esdsim_cli::CliError;
use esdsim_core::gates::CxRule;

#[derive(Parser)]
#[command(
    name = "esdsim",
    version,
    about = "Entanglement sudden death and birth simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiments and write one CSV per set plus a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Only run the first N sets.
        #[arg(long)]
        sets: Option<usize>,
        #[arg(long)]
        no_mitigation: bool,
    },
    /// Closed-form concurrence curves and ESD/ESB times.
    Analytic {
        /// e.g. "1/sqrt(3)" or 0.5
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0.0)]
        grid_min: f64,
        #[arg(long, default_value_t = 3.0)]
        grid_max: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Output CSV; the manifest is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw series CSVs, with optional closed-form curves, as an SVG.
    Plot {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        /// Closed-form CSV for the panel at the same position; repeatable.
        #[arg(long)]
        analytic: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ancilla ground-state population after preparation.
    Diagnose {
        /// Config whose [noise] block is used; default noise otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        noiseless: bool,
        /// Shots per point, or "exact" (the default).
        #[arg(long)]
        shots: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the transpiler on seeded random routed circuits.
    TranspileCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, hide = true)]
        corrupt_rule: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            sets,
            no_mitigation,
        } => {
            let paths = cmd_run(
                &config,
                &out,
                &RunOptions {
                    seed,
                    sets,
                    no_mitigation,
                },
            )?;
            for p in paths {
                println!("{}", p.display());
            }
        }
        Command::Analytic {
            alpha,
            grid_min,
            grid_max,
            points,
            out,
        } => {
            let grid = GridSpec {
                min: grid_min,
                max: grid_max,
                points,
            };
            cmd_analytic(&alpha, grid, &out)?;
        }
        Command::Plot { csv, analytic, out } => cmd_plot(&csv, &analytic, &out)?,
        Command::Diagnose {
            config,
            noiseless,
            shots,
            seed,
            out,
        } => {
            let shots = shots.map(|s| match s.parse::<u64>() {
                Ok(n) => ShotsSpec::Count(n),
                Err(_) => ShotsSpec::Mode(s),
            });
            cmd_diagnose(
                &DiagnoseOptions {
                    config,
                    noiseless,
                    shots,
                    seed,
                },
                &out,
            )?;
        }
        Command::TranspileCheck {
            seed,
            n,
            corrupt_rule: corrupt,
        } => {
            let rule = if corrupt {
                corrupted_rule()
            } else {
                CxRule::standard()
            };
            cmd_transpile_check(seed, n, &rule, &mut std::io::stdout().lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
