//! Command-line front end: spectrum/grid sweeps from a TOML config, figure
//! reproduction presets, and the quantitative self-check suite.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on numerical
//! failures (including failed checks).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rydscatter::checks;
use rydscatter::error::Error;
use rydscatter::sweep::{
    figure_ids, parse_config, reproduce, run_sweep_with_jobs, write_figure, OutputFormat,
    SweepTable,
};

#[derive(Parser)]
#[command(
    name = "rydscatter",
    version,
    about = "Single-photon scattering spectra for waveguide-coupled, driven Rydberg atom pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-axis sweep of one model (the config must define axis1 only).
    Spectrum {
        /// TOML sweep configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output encoding.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Worker threads for the sweep.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Two-axis sweep (the config must define axis1 and axis2).
    Grid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Rebuild one of the reference panels (table plus manifest).
    Reproduce {
        /// Panel id, e.g. fig2a, fig3d, fig7c, figS1b; `list` prints all.
        figure: String,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Run the quantitative self-check suite and print one line per check.
    Check,
}

fn emit(table: &SweepTable, out: Option<&PathBuf>, format: OutputFormat) -> Result<(), Error> {
    let text = table.emit(format);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn warn_about_regime(spec: &rydscatter::sweep::SweepSpec) {
    for warning in spec.params.regime_warnings(spec.family) {
        eprintln!("warning: {warning}");
    }
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Spectrum { config, out, format, jobs } => {
            let format = OutputFormat::parse(&format)?;
            let text = std::fs::read_to_string(&config)?;
            let spec = parse_config(&text)?;
            if spec.axis2.is_some() {
                return Err(Error::config(
                    "axis2",
                    "spectrum takes a single axis; use the grid subcommand",
                ));
            }
            warn_about_regime(&spec);
            let table = run_sweep_with_jobs(&spec, jobs)?;
            emit(&table, out.as_ref(), format)
        }
        Command::Grid { config, out, format, jobs } => {
            let format = OutputFormat::parse(&format)?;
            let text = std::fs::read_to_string(&config)?;
            let spec = parse_config(&text)?;
            if spec.axis2.is_none() {
                return Err(Error::config(
                    "axis2",
                    "grid needs a second axis; use the spectrum subcommand for one axis",
                ));
            }
            warn_about_regime(&spec);
            let table = run_sweep_with_jobs(&spec, jobs)?;
            emit(&table, out.as_ref(), format)
        }
        Command::Reproduce { figure, out, format } => {
            if figure == "list" {
                for id in figure_ids() {
                    println!("{id}");
                }
                return Ok(());
            }
            let format = OutputFormat::parse(&format)?;
            let output = reproduce(&figure)?;
            let paths = write_figure(&output, &out, format)?;
            for path in paths {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Check => {
            let outcomes = checks::run_all();
            let mut failed = 0;
            for outcome in &outcomes {
                println!("{}", outcome.line());
                if !outcome.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err(Error::Numerical(format!(
                    "{failed} of {} checks failed",
                    outcomes.len()
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
