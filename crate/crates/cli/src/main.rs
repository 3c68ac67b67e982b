//! `malle-lab`: exponents, bounds, field censuses and class-group torsion from the command line.

mod commands;
mod config;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use malle_core::{Error, ErrorKind};

#[derive(Debug, Parser)]
#[command(
    name = "malle-lab",
    version,
    about = "Malle exponents, Theorem 1 bounds and number field censuses"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// TOML file with defaults for seed, workers, registry, assume_l_torsion, base, budget, json.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for sampled Galois labels (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Emit JSON instead of text tables where a command supports both.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Args, Clone, Default)]
pub struct BoundOpts {
    /// Extra registry entries, e.g. `D Q C_7 2 = 11/24 # PTBW`.
    #[arg(long, value_name = "FILE")]
    pub registry: Option<PathBuf>,
    /// Conjecture mode: l-torsion conjecture for D and Malle's exponents for a1.
    #[arg(long)]
    pub assume_l_torsion: bool,
    /// Base field of the count: Q or k (general).
    #[arg(long)]
    pub base: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// d, ind(G), a(G,d) and a witness element.
    Invariants { group: String },
    /// Frobenius classification, abelian normal subgroups and (m, t, p, p1).
    Analyze { group: String },
    /// Theorem 1 bound A(G,d) with its trace.
    Bound {
        group: String,
        /// kernel (d = m) or regular (d = |G|).
        #[arg(long)]
        degree: String,
        #[command(flatten)]
        opts: BoundOpts,
        /// Show the recomputation check of every arithmetic step.
        #[arg(long)]
        trace: bool,
    },
    /// Recompute the worked-example table and compare with the printed values.
    Table {
        /// Primes l for the C_l:C_(l-1) rows.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,11")]
        primes: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate number fields of a given degree by discriminant.
    Census {
        /// Field degree, 2 to 6.
        #[arg(long)]
        degree: usize,
        /// Comma-separated Galois labels to keep (default: all).
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        /// Largest |disc| to enumerate.
        #[arg(long)]
        max_disc: u64,
        /// Signature filter `r1,r2`.
        #[arg(long)]
        signature: Option<String>,
        /// Catalog CSV; a JSON sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// `auto` or a comma-separated list of X values for the count summary.
        #[arg(long, default_value = "auto")]
        checkpoints: String,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Stop after this many polynomials, saving a checkpoint.
        #[arg(long)]
        budget: Option<u64>,
        /// Resume state file (default: next to --out).
        #[arg(long, value_name = "FILE")]
        state: Option<PathBuf>,
    },
    /// Counting function and log-log slope of a catalog.
    Slopes {
        catalog: PathBuf,
        /// Group for the reference exponents a(G,d) and A(G,d).
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value = "auto")]
        checkpoints: String,
        /// Census bound; read from the sidecar when omitted.
        #[arg(long)]
        max_disc: Option<u64>,
    },
    /// S3 towers K / M / N and the discriminant relations.
    Towers {
        /// Largest |d_K| of the cubic base field.
        #[arg(long)]
        max_disc: u64,
        /// Keep the N smallest |d_K|.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Class groups of imaginary quadratic fields and their m-torsion.
    ClassTorsion {
        /// Largest |D| over negative fundamental discriminants.
        #[arg(long)]
        max_disc: u64,
        /// Torsion order.
        #[arg(long, default_value_t = 3)]
        m: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also compare cubic field counts with (|Cl_D[3]| - 1)/2.
        #[arg(long)]
        hasse: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Intermediate-field bounds for the degree 6 and 14 cases.
    Limitations {
        /// One of A4_deg6, C3sq_C4_deg6, C3sq_C2_deg6, D6_deg6, C2cube_C7_deg14 (default: all).
        #[arg(long)]
        case: Option<String>,
        #[command(flatten)]
        opts: BoundOpts,
        /// Evaluate aH + D - r/R <= 0 for `aH,D,r,R` (rationals allowed).
        #[arg(long, value_name = "aH,D,r,R")]
        check: Option<String>,
    },
}

fn exit_code(e: &Error) -> u8 {
    if matches!(e, Error::Interrupted(_)) {
        return 130;
    }
    match e.kind() {
        ErrorKind::Invariant => 2,
        ErrorKind::Capacity => 3,
        ErrorKind::Parse => 4,
        ErrorKind::Other => 1,
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    Some(match e {
        Error::Budget { .. } => "rerun the same command (with a larger --budget) to resume from the checkpoint",
        Error::Interrupted(_) => "rerun the same command to resume from the checkpoint",
        Error::Capacity { .. } => "the group closure is too large; use a smaller representation",
        Error::SearchBound(_) => "the lattice search hit its node cap; the input may be badly conditioned",
        _ => return None,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            let code = match e.kind() {
                K::DisplayHelp | K::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("malle-lab: error: {e}");
            if let Some(h) = hint(&e) {
                eprintln!("hint: {h}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
