use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bellspace_cli::commands::{self, Method, ScanParam};
use bellspace_cli::CliError;

#[derive(Parser)]
#[command(name = "bellspace", version, about = "Spatially resolved Bell correlations and LHV membership")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Quadrature,
    Montecarlo,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    #[value(name = "half_width")]
    HalfWidth,
    Separation,
}

#[derive(Subcommand)]
enum Command {
    /// Overlap factor g of the scenario's detector boxes.
    Gfactor {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "closed")]
        method: MethodArg,
        #[arg(long, default_value_t = commands::DEFAULT_QUAD_TOL)]
        tol: f64,
        #[arg(long, default_value_t = commands::DEFAULT_MC_SAMPLES)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// CHSH value at the file's settings and the optimized maximum.
    Chsh {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = commands::DEFAULT_CHSH_TOL)]
        tol: f64,
    },
    /// LHV representability of the table g * E_spin(a_i, b_j).
    Lhv {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = commands::DEFAULT_LHV_TOL)]
        tol: f64,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Sweep box half-width or packet separation and write a CSV table.
    Scan {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce the Gaussian example and verify its inequalities.
    Paper,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Gfactor { scenario, method, tol, n, seed } => {
            let method = match method {
                MethodArg::Closed => Method::Closed,
                MethodArg::Quadrature => Method::Quadrature,
                MethodArg::Montecarlo => Method::MonteCarlo,
            };
            print_json(&commands::gfactor(&scenario, method, tol, n, seed)?);
        }
        Command::Chsh { scenario, tol } => print_json(&commands::chsh(&scenario, tol)?),
        Command::Lhv { scenario, tol, witness } => print_json(&commands::lhv(&scenario, tol, witness.as_deref())?),
        Command::Scan { scenario, param, from, to, steps, out } => {
            let param = match param {
                ParamArg::HalfWidth => ScanParam::HalfWidth,
                ParamArg::Separation => ScanParam::Separation,
            };
            print_json(&commands::scan(&scenario, param, from, to, steps, &out)?);
        }
        Command::Paper => {
            let (report, ok) = commands::paper()?;
            print_json(&report);
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("bellspace: paper self-test failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("bellspace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
