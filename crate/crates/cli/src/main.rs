//! `tropo`: sweeps, self-test and figure data for the injected OPO noise model.

mod config;
mod error;
mod figures;
mod sweep;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tropo_core::acceptance;
use tropo_core::presets::Figure;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "tropo",
    version,
    about = "Quantum-noise sweeps for an injected triply resonant OPO"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the sweep described by a TOML config file.
    Run { config: PathBuf },
    /// Run the acceptance criteria; exit 0 only if all pass.
    Selftest,
    /// Write purity curves for one of the preset figures.
    Figures {
        /// 1a, 1b, 2, 3a or 3b.
        figure: String,
        outdir: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let summary = sweep::run(&cfg)?;
            eprintln!(
                "{} sweep points, {} files, {} regime warnings",
                summary.points,
                summary.files.len(),
                summary.warnings
            );
            Ok(())
        }
        Command::Selftest => {
            let reports = acceptance::run_all();
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!(
                "{} of {} criteria passed",
                reports.len() - failed,
                reports.len()
            );
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::SelfTest {
                    failed,
                    total: reports.len(),
                })
            }
        }
        Command::Figures {
            figure,
            outdir,
            format,
        } => {
            let fig: Figure = figure
                .parse()
                .map_err(|e: tropo_core::Error| CliError::Config(e.to_string()))?;
            let path = figures::write(fig, &outdir, Format::parse(&format)?)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
