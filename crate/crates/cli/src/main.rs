use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ergoflow_core::config::{parse_config_with, Command, Format, Overrides};
use ergoflow_core::suite::{exit_code, run_suite};
use ergoflow_core::Error;

#[derive(Parser)]
#[command(name = "ergoflow", version, about = "Exact checks for flows, residue defects and odometers")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Residue-split identities and defect enumeration on a grid
    Identities(Common),
    /// Defect decay table for a sequence spec
    Defects(Common),
    /// Approximate-transitivity certificate for a family of step functions
    Certify(Common),
    /// Flow the configured points and check the flow laws
    Flow(Common),
    /// Towers, adic coding and block masses for the odometer
    Odometer(Common),
    /// Seeded recurrence statistic for the odometer
    Recurrence(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long = "max-depth", value_name = "N")]
    max_depth: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Last block index of the range (defects)
    #[arg(long, value_name = "M")]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn run(command: Command, common: &Common) -> Result<i32, Error> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => format!("{{\"command\": \"{}\"}}", command.name()),
    };
    let overrides = Overrides {
        command: Some(command),
        out: common.out.clone(),
        seed: common.seed,
        max_depth: common.max_depth,
        format: common.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        m: common.m,
    };
    let config = parse_config_with(&text, &overrides)?;
    let outcome = run_suite(&config);
    let code = exit_code(&outcome);
    let outcome = outcome?;
    for c in &outcome.report.checks {
        let status = if c.passed() { "ok" } else { "FAILED" };
        println!(
            "{:<24} {status:<6} checked={} failed={} skipped={}",
            c.name, c.checked, c.failed, c.skipped
        );
        for f in &c.failures {
            println!("    {f}");
        }
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Sub::Identities(c) => (Command::Identities, c),
        Sub::Defects(c) => (Command::Defects, c),
        Sub::Certify(c) => (Command::Certify, c),
        Sub::Flow(c) => (Command::Flow, c),
        Sub::Odometer(c) => (Command::Odometer, c),
        Sub::Recurrence(c) => (Command::Recurrence, c),
    };
    let code = match run(command, common) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    ExitCode::from(code as u8)
}
