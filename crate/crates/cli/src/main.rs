//! `repair-lab`: construct, cost, exercise and certify repair schemes for
//! full-length Reed-Solomon codes.

mod commands;
mod table;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "repair-lab", version, about = "Repair schemes for full-length Reed-Solomon codes")]
struct Cli {
    /// Emit JSON instead of a human-readable table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Field selection shared by every command. `--field` takes the text form
/// `q=2 ell=3 modulus=[1,1,0,1]`; the other flags override its parts.
#[derive(Args, Clone, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Monic irreducible modulus, coefficients in ascending degree.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Basis of F over GF(q) as canonical integers.
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build the q-polynomial scheme for node 1 and report its costs.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        /// Defaults to the largest s with q^s + 1 <= n - k.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Cost a scheme read as JSON from stdin.
    Cost,
    /// Repair one erased symbol of a seeded random codeword.
    RepairDemo {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: Option<usize>,
        /// Erased node, 1-based.
        #[arg(long, default_value_t = 1)]
        node: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive minimum I/O cost over all linear repair schemes.
    SearchMin {
        #[command(flatten)]
        field: FieldArgs,
        /// Redundancy n - k.
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        node: usize,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Compare the lower bound, the searched minimum and the construction.
    #[command(alias = "verify-bounds")]
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Closed-form costs against the trivial and bandwidth-optimal repairs.
    Compare {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
    },
    /// Modulus, basis, dual basis and subsymbol maps of a field.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.json) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
