use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shcm_core::RuleKind;

#[derive(Debug, Parser)]
#[command(
    name = "shcm",
    version,
    about = "Septic Hermite collocation solver for the 1D heat equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one configuration and print the nodal solution with its error.
    Solve(SolveArgs),
    /// Reproduce one of the reference error tables.
    Table(TableArgs),
    /// Refine dt or N repeatedly and report observed orders.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Legendre,
    Chebyshev,
    Both,
}

impl RuleArg {
    pub fn kinds(self) -> Vec<RuleKind> {
        match self {
            RuleArg::Legendre => vec![RuleKind::LegendreRoots],
            RuleArg::Chebyshev => vec![RuleKind::ChebyshevRoots],
            RuleArg::Both => vec![RuleKind::LegendreRoots, RuleKind::ChebyshevRoots],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    /// Halve dt on every row.
    Dt,
    /// Double the element count on every row.
    N,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file, or `-` for standard output.
    #[arg(long, short, default_value = "-")]
    pub output: PathBuf,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum, default_value_t = RuleArg::Legendre)]
    pub rule: RuleArg,

    /// Thermal diffusivity.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    /// Initial data sin(m pi x); m = 1 is the standard control problem.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub mode: u32,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Number of elements.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,

    #[arg(long)]
    pub dt: f64,

    #[arg(long)]
    pub t_final: f64,

    #[command(flatten)]
    pub problem: ProblemArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Table to reproduce (1, 2, 4 or 5).
    #[arg(long)]
    pub id: u8,

    #[arg(long, value_enum, default_value_t = RuleArg::Both)]
    pub rule: RuleArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepAxis,

    /// Number of rows in the sweep.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,

    /// Element count of the first row.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,

    /// Time step of the first row.
    #[arg(long)]
    pub dt: f64,

    #[arg(long)]
    pub t_final: f64,

    #[command(flatten)]
    pub problem: ProblemArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}
