use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};

use hopfore::greenring::RelationSample;
use hopfore::hopfdata::HopfParams;
use hopfore_cli::commands;
use hopfore_cli::config::load_params;
use hopfore_cli::parse::{parse_character, parse_cyc};
use hopfore_cli::{exit, CliError, Engine, Format, Outcome};

/// Tensor products and Green ring computations for weight modules over
/// kG(χ⁻¹, a, 0).
///
/// Exit codes: 0 success, 1 suite failure or engine error, 2 rules/oracle
/// mismatch, 3 incomplete eigenvalue pool, 4 invalid config or input.
#[derive(Parser)]
#[command(name = "hopfore", version)]
struct Cli {
    /// Session datum (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Dimension bound for `green basis`.
    #[arg(long, global = true, default_value_t = 20)]
    trunc: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decompose a tensor product of two module expressions.
    Tensor {
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        #[arg(long, value_enum, default_value_t = Engine::Both)]
        engine: Engine,
        /// LEFT RIGHT, when not given as flags.
        operands: Vec<String>,
    },
    /// Green ring computations.
    Green {
        #[command(subcommand)]
        sub: GreenCmd,
    },
    /// Rules against oracle, oracle round-trips and relation suites.
    Selftest {
        /// Pairs sampled per configuration; 0 checks the whole envelope.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Corrupt the rules output to exercise mismatch detection.
        #[arg(long, hide = true)]
        tamper: bool,
    },
    Config {
        #[command(subcommand)]
        sub: ConfigCmd,
    },
}

#[derive(Subcommand)]
enum GreenCmd {
    /// Multiply two ring expressions.
    Mul {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Write module classes in the generators.
    Express {
        #[arg(long)]
        module: String,
    },
    /// Check the ring relations on sampled characters and roots.
    Relations {
        #[arg(long = "char")]
        chars: Vec<String>,
        #[arg(long = "root")]
        roots: Vec<String>,
    },
    /// Check the change of basis between monomials and classes.
    Basis {
        #[arg(long = "char")]
        chars: Vec<String>,
        #[arg(long = "root")]
        roots: Vec<String>,
    },
}

#[derive(Subcommand)]
enum ConfigCmd {
    /// Validate the datum and print its derived parameters.
    Validate,
}

fn params(cli: &Cli) -> Result<HopfParams, CliError> {
    match &cli.config {
        Some(path) => load_params(path),
        None => Err(CliError::Config("--config is required".into())),
    }
}

fn sample(p: &HopfParams, chars: &[String], roots: &[String]) -> Result<RelationSample, CliError> {
    let mut s = commands::default_sample(p);
    if !chars.is_empty() {
        s.chars = chars.iter().map(|c| parse_character(c, p)).collect::<Result<_, _>>()?;
    }
    if !roots.is_empty() {
        s.roots = roots.iter().map(|r| parse_cyc(r, p.n)).collect::<Result<_, _>>()?;
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let f = cli.format;
    match &cli.cmd {
        Cmd::Tensor { left, right, engine, operands } => {
            let p = params(cli)?;
            let mut rest = operands.iter();
            let l = left.clone().or_else(|| rest.next().cloned());
            let r = right.clone().or_else(|| rest.next().cloned());
            match (l, r) {
                (Some(l), Some(r)) => commands::tensor(&p, &l, &r, *engine, f),
                _ => Err(CliError::Config("tensor needs a left and a right module".into())),
            }
        }
        Cmd::Green { sub } => {
            let p = params(cli)?;
            match sub {
                GreenCmd::Mul { left, right } => commands::green_mul(&p, left, right, f),
                GreenCmd::Express { module } => commands::green_express(&p, module, f),
                GreenCmd::Relations { chars, roots } => Ok(commands::green_relations(&p, &sample(&p, chars, roots)?, f)),
                GreenCmd::Basis { chars, roots } => commands::green_basis(&p, cli.trunc, &sample(&p, chars, roots)?, f),
            }
        }
        Cmd::Selftest { budget, tamper } => {
            let p = match &cli.config {
                Some(path) => Some(load_params(path)?),
                None => None,
            };
            Ok(commands::selftest(p.as_ref(), cli.seed, *budget, *tamper, f))
        }
        Cmd::Config { sub: ConfigCmd::Validate } => Ok(commands::config_validate(&params(cli)?, f)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    ExitCode::from(exit::OK as u8)
                }
                _ => ExitCode::from(exit::CONFIG as u8),
            };
        }
    };
    let outcome = run(&cli).unwrap_or_else(|e| Outcome::from_error(&e, cli.format));
    if outcome.code != exit::OK && cli.format == Format::Text && outcome.out.starts_with("error:") {
        let _ = std::io::stderr().write_all(outcome.out.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(outcome.out.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
