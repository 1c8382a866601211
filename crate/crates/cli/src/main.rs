mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::error::ErrorKind;
use clap::Parser;

use commands::{dispatch, Command, VerifyFailed};
use config::ConfigFile;
use output::{open_output, plot_script, Format};

/// Classical, semiclassical and quantum data for H = x⁴p²/4 + λx².
///
/// Every parameter resolves as: command-line flag, then the `--config`
/// file entry of the same name, then the built-in default.
#[derive(Debug, Parser)]
#[command(name = "deltamass", version)]
struct Cli {
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write a matplotlib script that plots the output file.
    #[arg(long, global = true)]
    plot_script: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = cfg.resolve(cli.format, "format", Format::Csv)?;
    let output = cfg.resolve_opt(cli.output.clone(), "output")?;
    let plot_path = cfg.resolve_opt(cli.plot_script.clone(), "plot_script")?;
    if plot_path.is_some() && output.is_none() {
        bail!("--plot-script needs --output so the script has a file to read");
    }

    let run = dispatch(&cli.command, &cfg, cli.seed)?;
    let mut out = open_output(output.as_deref())?;
    run.table.write(format, &mut out)?;
    out.flush()?;
    if let (Some(script), Some(data)) = (&plot_path, &output) {
        std::fs::write(script, plot_script(data, format, &run.plot))?;
    }
    if let Some(summary) = &run.summary {
        eprint!("{summary}");
    }
    match run.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerifyFailed>().is_some() {
        return 2;
    }
    match err.downcast_ref::<deltamass_core::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
