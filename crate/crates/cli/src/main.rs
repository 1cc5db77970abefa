//! `gis`: build, verify and sweep generalized intelligent states.
//!
//! Exit status: 0 success, 1 configuration or I/O error, 2 numerical failure
//! (reason code on stderr), 3 verification failure.

mod commands;
mod config;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{Artifact, CliError, Format, Overrides};
use config::Config;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gis", version, about = "Generalized intelligent states for discrete spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; standard output if omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Fixed truncation, overriding the config
    #[arg(long, global = true)]
    trunc: Option<usize>,

    /// Verification tolerance, overriding the config
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Coefficient dump and uncertainty report for one state
    Build,
    /// Invariant suite for one state
    Verify,
    /// Uncertainty quantities over a (λ, z) grid
    Sweep,
    /// Moment residuals of a measure density
    MeasureCheck,
    /// Position-space eigenfunctions and Ψ(x)
    Wavefunction,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

fn run(cli: &Cli) -> Result<Artifact, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config::ConfigError("--config is required".into()))?;
    let cfg = Config::load(path)?;
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(config::ConfigError("--tol must be positive".into()).into());
        }
    }
    let o = Overrides {
        trunc: cli.trunc,
        tol: cli.tol,
    };
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    match cli.command {
        Command::Build => commands::build_cmd(&cfg, o, format),
        Command::Verify => commands::verify_cmd(&cfg, o, format),
        Command::Sweep => commands::sweep_cmd(&cfg, o, format),
        Command::MeasureCheck => commands::measure_cmd(&cfg, o, format),
        Command::Wavefunction => commands::wavefunction_cmd(&cfg, o, format),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

fn main() -> ExitCode {
    // usage errors are configuration errors (exit 1), not clap's default 2
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|a| emit(&cli, &a.text).map(|_| a.failed));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
