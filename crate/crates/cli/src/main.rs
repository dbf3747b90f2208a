//! `qzeta`: evaluate multiple q-Euler zeta and l-functions, tabulate them,
//! manage Dirichlet characters and run the identity checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or domain error,
//! 3 convergence failure.

mod characters;
mod eval;
mod failure;
mod literal;
mod output;
mod params;
mod table;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use failure::Failure;
use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "qzeta",
    version,
    about = "Multiple q-Euler zeta functions and q-Euler polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The multiple q-Euler zeta function at one point.
    EvalZeta(eval::ZetaArgs),
    /// The Dirichlet-type l-function at one point.
    EvalL(eval::LArgs),
    /// The q-Euler polynomial of order r (or its character analogue).
    EvalEuler(eval::EulerArgs),
    /// The generating function (or its character analogue).
    EvalGenfn(eval::GenFnArgs),
    /// List, build or validate Dirichlet characters.
    Characters(characters::CharactersArgs),
    /// Check the special-value and distribution identities.
    Verify(verify::VerifyArgs),
    /// Evaluate on a grid of up to two ranged axes.
    Table(table::TableArgs),
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let format = cli.format;
    match cli.command {
        Command::EvalZeta(args) => eval::zeta(&args, format).map(|s| (s, 0)),
        Command::EvalL(args) => eval::l(&args, format).map(|s| (s, 0)),
        Command::EvalEuler(args) => eval::euler(&args, format).map(|s| (s, 0)),
        Command::EvalGenfn(args) => eval::gen_fn(&args, format).map(|s| (s, 0)),
        Command::Characters(args) => characters::run(&args, format).map(|s| (s, 0)),
        Command::Verify(args) => verify::run(&args, format),
        Command::Table(args) => table::run(&args, format).map(|s| (s, 0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(failure::EXIT_INPUT);
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
