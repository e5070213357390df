//! Command-line sweeps over the lattice Casimir energies, written as CSV.
//!
//! Lengths are in units of the lattice spacing `a`. Settings come from an
//! optional `key = value` file, overridden by flags of the same name.

pub mod config;
pub mod range;
pub mod request;
pub mod sweep;
pub mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::request::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDITY: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Parser, Debug)]
#[command(name = "lattice-casimir", version, about = "Casimir energies between lattices of point scatterers")]
struct Cli {
    #[command(subcommand)]
    mode: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy per cell against separation for each coupling.
    EnergyCurve(Flags),
    /// Ratio of displaced to aligned chain energies.
    Displacement(Flags),
    /// Exact chain energy against the pairwise sum.
    PairwiseCompare(Flags),
    /// Full energies against their small- or large-spacing limits.
    LimitsCheck(Flags),
    /// Two cylinders at small radius against the log asymptote.
    CylinderOracle(Flags),
    /// Finite chains against the momentum-space energy.
    FiniteOracle(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// chain or lattice2d
    #[arg(long)]
    geometry: Option<String>,
    /// Couplings, as a list or start:stop:count[:lin|log]
    #[arg(long, value_name = "RANGE")]
    g_over_a: Option<String>,
    #[arg(long, value_name = "RANGE")]
    b_over_a: Option<String>,
    #[arg(long, value_name = "RANGE", allow_hyphen_values = true)]
    c_over_a: Option<String>,
    /// Separations b/a for the displacement sweep
    #[arg(long, value_name = "RANGE")]
    beta: Option<String>,
    /// Pairwise sum runs over |n| <= N
    #[arg(long, value_name = "N")]
    n_terms: Option<String>,
    /// a-to-zero or a-to-infinity
    #[arg(long)]
    direction: Option<String>,
    #[arg(long, value_name = "RANGE")]
    a_over_b: Option<String>,
    #[arg(long, value_name = "RANGE")]
    r_over_d: Option<String>,
    /// Dimensionless cylinder coupling; inf for Dirichlet
    #[arg(long, value_name = "X")]
    g_r: Option<String>,
    /// Site counts of the finite chains
    #[arg(long, value_name = "LIST")]
    sites: Option<String>,
    #[arg(long, value_name = "N")]
    xi_order: Option<String>,
    #[arg(long, value_name = "N")]
    q_order: Option<String>,
    /// Minimum reciprocal shell of the lattice sums
    #[arg(long, value_name = "N")]
    n_recip: Option<String>,
    /// Relative tolerance of the adaptive quadrature
    #[arg(long, value_name = "X")]
    tol: Option<String>,
    #[arg(long, value_name = "N")]
    max_panels: Option<String>,
    /// Write the table here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// key = value settings file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("geometry", &self.geometry),
            ("g-over-a", &self.g_over_a),
            ("b-over-a", &self.b_over_a),
            ("c-over-a", &self.c_over_a),
            ("beta", &self.beta),
            ("n-terms", &self.n_terms),
            ("direction", &self.direction),
            ("a-over-b", &self.a_over_b),
            ("r-over-d", &self.r_over_d),
            ("g-r", &self.g_r),
            ("sites", &self.sites),
            ("xi-order", &self.xi_order),
            ("q-order", &self.q_order),
            ("n-recip", &self.n_recip),
            ("tol", &self.tol),
            ("max-panels", &self.max_panels),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn usage(e: impl ToString) -> UsageError {
    UsageError(e.to_string())
}

/// Parses `args` (program name first), runs the sweep and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (mode, flags) = match cli.mode {
        Command::EnergyCurve(f) => (Mode::EnergyCurve, f),
        Command::Displacement(f) => (Mode::Displacement, f),
        Command::PairwiseCompare(f) => (Mode::PairwiseCompare, f),
        Command::LimitsCheck(f) => (Mode::LimitsCheck, f),
        Command::CylinderOracle(f) => (Mode::CylinderOracle, f),
        Command::FiniteOracle(f) => (Mode::FiniteOracle, f),
    };
    match execute(mode, &flags) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(mode: Mode, flags: &Flags) -> Result<i32, UsageError> {
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            config::parse_config(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => BTreeMap::new(),
    };
    let req = request::resolve(mode, &file, &flags.settings())?;
    // open the output first so a bad path fails before any computation
    let out: Box<dyn Write> = match &flags.out {
        Some(path) => Box::new(File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let sweep = sweep::run(&req);
    for (i, status) in sweep.statuses.iter().enumerate() {
        if let sweep::RowStatus::Failed { message, .. } = status {
            eprintln!("row {}: {message}", i + 1);
        }
    }
    let mut out = BufWriter::new(out);
    sweep.table.write(&mut out).map_err(usage)?;
    out.flush().map_err(usage)?;
    Ok(sweep.exit_code())
}
