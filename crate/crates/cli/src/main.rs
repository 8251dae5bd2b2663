use clap::{Parser, Subcommand};

use linebal_cli::commands::{self, CompareArgs, GenArgs, SolveArgs};

/// Cost-optimal station assignment for precedence-constrained task lines.
#[derive(Parser)]
#[command(name = "linebal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance of one of the three coupling classes
    Gen(GenArgs),
    /// Run the genetic algorithm and write CSV, plan, and SVG reports
    Solve(SolveArgs),
    /// Run several methods over an instance corpus and compare to the oracle
    Compare(CompareArgs),
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(args) => commands::cmd_gen(&args),
        Command::Solve(args) => commands::cmd_solve(&args),
        Command::Compare(args) => commands::cmd_compare(&args),
    }
}
