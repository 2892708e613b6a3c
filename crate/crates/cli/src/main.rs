use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::Failure;

/// Cohomology of pointed Hopf algebras and quantum complete intersections.
#[derive(Parser, Debug)]
#[command(name = "pointed-coh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a datum file: Cartan condition, linking and root vector constraints, standing assumptions.
    Validate(Common),
    /// Positive roots with their grouplikes, characters, N_α and M_α.
    Roots(Common),
    /// Presentation of H*(Gr u, k): generators, relations, Hilbert series.
    Cohomology(Common),
    /// Γ-invariant monomials of H*(Gr u, k).
    Invariants {
        #[command(flatten)]
        common: Common,
        /// Decide whether an odd-degree invariant exists and print the smallest one.
        #[arg(long)]
        odd_witness: bool,
    },
    /// Module generators over the subalgebra generated by the ξ_α^{M_α}.
    Fingen {
        #[command(flatten)]
        common: Common,
        /// List every module generator.
        #[arg(long)]
        list: bool,
    },
    /// Ext dimensions from the reduced bar complex.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Highest Ext degree.
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Which algebra to feed to the bar complex.
        #[arg(long, value_enum, default_value_t = AlgebraChoice::U)]
        algebra: AlgebraChoice,
        /// Compare against the closed form or the invariant count.
        #[arg(long)]
        compare: bool,
    },
    /// Resolution exactness, relations, comparison maps and cocycle checks.
    Check(Common),
    /// Rebuild the worked examples from the built-in presets.
    Examples {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Datum file.
    #[arg(long)]
    pub datum: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Highest cohomological degree for series, invariants and exactness.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_degree: u32,
    /// Highest degree for chain-level relation checks.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub relation_degree: u32,
    /// Sampled tuples per cocycle when exhaustive checking is too large.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, env = "POINTED_COH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Elimination budget for the oracle (defaults to POINTED_COH_ORACLE_BUDGET or 5000000).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Records,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraChoice {
    /// u(D, λ, 0) (type A1 x ... x A1 only).
    U,
    /// Gr u = S # kΓ on the root vectors.
    Gr,
    /// Nichols algebra of the first A2 component.
    Nichols,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = match cli.command {
        Command::Validate(c) => (c.format, commands::validate(&c)),
        Command::Roots(c) => (c.format, commands::roots(&c)),
        Command::Cohomology(c) => (c.format, commands::cohomology(&c)),
        Command::Invariants { common, odd_witness } => (common.format, commands::invariants(&common, odd_witness)),
        Command::Fingen { common, list } => (common.format, commands::fingen(&common, list)),
        Command::Oracle { common, degree, algebra, compare } => {
            (common.format, commands::oracle(&common, degree, algebra, compare))
        }
        Command::Check(c) => (c.format, commands::check(&c)),
        Command::Examples { format } => (format, commands::examples()),
    };
    match result {
        Ok(report) => {
            print!("{}", render::render(&report.records, format));
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
