mod bounds;
mod capacity;
mod certify;
mod curve;
mod input;
mod plot;
mod record;
mod suites;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use input::Input;

/// Exact capacities and embedding bounds for four-dimensional ellipsoids and
/// polydiscs.
#[derive(Parser)]
#[command(name = "capax", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Accept floating-point inputs, replaced by the nearest rational with
    /// denominator at most 10^6.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity sequences of ellipsoids and polydiscs.
    Capacity(capacity::Args),
    /// All bounds for one embedding problem, as JSON.
    Bounds(bounds::Args),
    /// Sampled embedding functions as CSV, optionally plotted.
    Curve(curve::Args),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Obstruction certificates.
    Certify(certify::Args),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// One of thm11, thm12, ex37, eh-pq, certs, boundary, fourdim, crossing,
    /// rescaled, props.
    #[arg(long)]
    suite: String,
    /// Smaller parameter ranges.
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Full parameter ranges (the default).
    #[arg(long)]
    full: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2.
    Usage(String),
    /// Bounds that contradict each other; exit code 20.
    Inconsistent(String),
    /// Anything else; exit code 1.
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inconsistent(_) => 20,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Inconsistent(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let checks = suites::run(&args.suite, !args.quick).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown suite '{}'; available: {}",
            args.suite,
            suites::SUITES.join(", ")
        ))
    })?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        if c.passed {
            println!("PASS {} {}", args.suite, c.name);
        } else {
            println!("FAIL {} {}: {}", args.suite, c.name, c.detail);
        }
    }
    println!("{}: {} passed, {} failed", args.suite, checks.len() - failed, failed);
    Ok(if failed == 0 { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    let input = Input { approx: cli.approx };
    match &cli.command {
        Command::Capacity(a) => capacity::run(a, &input),
        Command::Bounds(a) => bounds::run(a, &input),
        Command::Curve(a) => curve::run(a, &input),
        Command::Verify(a) => verify(a),
        Command::Certify(a) => certify::run(a, &input),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
