//! `xrh`: construct, reduce and verify permutation polynomials
//! x^r·h(x^(q−1)) over F_{q²}, and reproduce the search tables.
//!
//! Exit codes: 0 success, 1 a verification mismatch, 2 a usage or
//! configuration error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xrh_core::construct::family::FamilyId;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "xrh", version, about = "Permutation polynomials x^r h(x^(q-1)) over F_{q^2}")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Characteristic.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Degree of F_q over F_p.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Modulus override file (`mid: c0 c1 ... 1`, `top: m0 m1 1`).
    #[arg(long, global = true, value_name = "PATH")]
    pub modulus: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for sampled searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print field elements in polynomial-basis form.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check conditions (i)-(iv) for f = x^r h(x^(q-1)).
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = 1)]
        r: i64,
        /// Also decide by enumerating F_{q^2}.
        #[arg(long)]
        oracle: bool,
    },
    /// Write h(x) on mu_{q+1} as h1(a) x + h2(a), a = x + 1/x.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Build h from (h1, h2) and assemble f.
    Construct {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
        #[arg(long, default_value_t = 1)]
        r: i64,
        /// Show h with half exponents (characteristic 2).
        #[arg(long)]
        paper_form: bool,
        #[arg(long)]
        oracle: bool,
    },
    /// One member of a named family with its predicted status.
    Family {
        #[arg(long)]
        family: FamilyId,
        #[command(flatten)]
        params: ParamArgs,
        /// Check the prediction on F_{q^2}.
        #[arg(long)]
        oracle: bool,
    },
    /// Monomial s-searches over a range of k, as CSV "p,k,s".
    ReproduceTables {
        #[arg(long, default_value_t = 2)]
        kmin: u32,
        #[arg(long)]
        kmax: u32,
        /// Also test s in {2^i mod (q-1)} (characteristic 2).
        #[arg(long)]
        include_frobenius: bool,
        /// Compare the CSV output with this file; a difference exits 1.
        #[arg(long, value_name = "PATH")]
        golden: Option<PathBuf>,
    },
    /// The known trinomial classes, checked on mu_{q+1} and through L(b).
    VerifyKnown {
        #[arg(long, default_value_t = 3)]
        kmin: u32,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[arg(long)]
        row: Option<u8>,
    },
    /// Oracle verdict against prediction for every admissible tuple.
    VerifyFamilies {
        /// Families to run (default: all).
        #[arg(long)]
        family: Vec<FamilyId>,
        #[arg(long)]
        kmin: Option<u32>,
        #[arg(long)]
        kmax: Option<u32>,
        /// Fields with larger q^2 get the T-level check.
        #[arg(long, default_value_t = 1 << 20)]
        max_q2: u64,
        /// Tuples x q^2 above this are sampled.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        /// Print only the per-family summaries.
        #[arg(long)]
        summary_only: bool,
    },
    /// s-search for one field, or the linearized classification.
    Search {
        #[arg(long)]
        include_frobenius: bool,
        /// Classify L(b) for linearized l(b) of degree 2^t.
        #[arg(long)]
        linearized: bool,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
}

#[derive(Args, Debug, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub j2: Option<u32>,
    #[arg(long)]
    pub alpha: Option<u32>,
    #[arg(long)]
    pub beta: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a closed stdout (e.g. piped into head) is not an error
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("xrh: {e:#}");
            ExitCode::from(2)
        }
    }
}
