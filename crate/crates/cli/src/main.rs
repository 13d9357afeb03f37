mod commands;
mod matrix_file;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use krein_core::Complex64;

use commands::{Method, PerturbInput, Source, Which};
use output::{Format, OutputRecord, Status};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_SPECTRAL: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Rank-one perturbations, Krein resolvent differences and the
/// Dirichlet/Neumann Laplacian on [0, 1].
#[derive(Debug, Parser)]
#[command(name = "krein", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a Green's function on an equispaced grid over [0,1]².
    Greens {
        #[arg(long, value_enum)]
        which: Which,
        /// Spectral parameter `RE[,IM]`; omit for the static kernel.
        #[arg(long, value_parser = parse_z, allow_hyphen_values = true)]
        z: Option<Complex64>,
        #[arg(long, default_value_t = 11)]
        grid_m: usize,
    },
    /// The first eigenvalues of the Dirichlet/Neumann Laplacian.
    Eigs {
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, value_enum, default_value = "analytic")]
        method: Method,
        /// Interior grid nodes, for the discrete method.
        #[arg(long)]
        n: Option<usize>,
    },
    /// The resolvent difference `(z − T_DN)⁻¹ − (z − T_DD)⁻¹`.
    ResolventDiff {
        #[arg(long, value_parser = parse_z, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_enum, default_value = "analytic")]
        source: Source,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 11)]
        grid_m: usize,
    },
    /// Invert `A − f<l|` through `A⁻¹`.
    #[command(group(ArgGroup::new("input").required(true).args(["matrix", "random"])))]
    Perturb {
        /// Matrix file; see the README for the format.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Use a seeded random instance instead of a file.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tune the random instance so that `A − f<l|` is singular.
        #[arg(long, value_parser = ["singular"], requires = "random")]
        craft: Option<String>,
    },
    /// Recover the factors of `T_DN⁻¹ − T_DD⁻¹` from the matrix alone.
    Recover {
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Run the invariant suite.
    Verify,
}

fn parse_z(s: &str) -> Result<Complex64> {
    matrix_file::parse_complex(s)
}

fn run(command: Command) -> Result<(OutputRecord, bool)> {
    let record = match command {
        Command::Greens { which, z, grid_m } => commands::greens(which, z, grid_m)?,
        Command::Eigs { count, method, n } => commands::eigs(count, method, n)?,
        Command::ResolventDiff {
            z,
            source,
            n,
            grid_m,
        } => commands::resolvent_diff(z, source, n, grid_m)?,
        Command::Perturb {
            matrix,
            random,
            dim,
            seed,
            craft,
        } => {
            let input = match matrix {
                Some(path) if !random => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    PerturbInput::File(matrix_file::parse(&text)?)
                }
                _ => PerturbInput::Random {
                    dim,
                    seed,
                    singular: craft.is_some(),
                },
            };
            commands::perturb(input)?
        }
        Command::Recover { n } => commands::recover(n)?,
        Command::Verify => return Ok(commands::verify()),
    };
    Ok((record, true))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<krein_core::Error>() {
        Some(e) if e.is_spectral() => EXIT_SPECTRAL,
        _ => EXIT_INPUT,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Greens { .. } => "greens",
        Command::Eigs { .. } => "eigs",
        Command::ResolventDiff { .. } => "resolvent-diff",
        Command::Perturb { .. } => "perturb",
        Command::Recover { .. } => "recover",
        Command::Verify => "verify",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let name = command_name(&cli.command);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command) {
        Ok((record, passed)) => {
            if let Err(e) = record.write(format, &mut out) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_INPUT);
            }
            let _ = out.flush();
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: invariant suite failed");
                ExitCode::from(EXIT_VERIFY_FAILED)
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            if format == Format::Json {
                let mut record = OutputRecord::new(name, &[]);
                record.status = Status::Error {
                    code: code.into(),
                    message: format!("{e:#}"),
                };
                let _ = record.write(format, &mut out);
            }
            ExitCode::from(code)
        }
    }
}
