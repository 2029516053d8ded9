//! `affdes`: build affine groups, enumerate orbit designs, verify design
//! files and run the elimination sieve.

mod bound;
mod common;
mod orbits;
mod sieve;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::{exit_code_for, GlobalArgs};

#[derive(Parser, Debug)]
#[command(name = "affdes", version, about = "Block-transitive Steiner designs from affine groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the arithmetic elimination rules over a family or one parameter set.
    Sieve(sieve::SieveArgs),
    /// Enumerate the orbits of a group on k-subsets.
    Orbits(orbits::OrbitsArgs),
    /// Check a design file, optionally against a group file.
    Verify(verify::VerifyArgs),
    /// Print k_max and the Cameron bounds for t = 4 or 5.
    Bound(bound::BoundArgs),
    /// Write the generators of a family in group-file format.
    Group(orbits::GroupArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { common::EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Sieve(a) => sieve::run(&cli.global, a),
        Command::Orbits(a) => orbits::run(&cli.global, a),
        Command::Verify(a) => verify::run(&cli.global, a),
        Command::Bound(a) => bound::run(&cli.global, a),
        Command::Group(a) => orbits::run_group(&cli.global, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("affdes: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
