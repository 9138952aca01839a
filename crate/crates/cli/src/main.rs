use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spohn_cli::commands::{self, Exit, Options, Output};
use spohn_core::SearchBounds;

/// Qualitative expected utility for lotteries under Spohnian disbelief.
#[derive(Parser)]
#[command(name = "spohn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every section of a problem file.
    Validate(FileArgs),
    /// Collapse the `lottery` section into a simple lottery.
    Reduce(FileArgs),
    /// Qualitative expected utility of the `lottery` section.
    Utility(FileArgs),
    /// Rank the acts of the `decision` section, alongside maximin.
    Rank(FileArgs),
    /// Convert the `prob_lottery` section and compare orders of magnitude.
    Bridge(FileArgs),
    /// Search small problems for a disagreement with maximin.
    Search(SearchArgs),
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    /// Print machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Base for order-of-magnitude conversion (default 10).
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    max_prizes: usize,
    #[arg(long, default_value_t = 5)]
    max_delta: u64,
    #[arg(long, default_value_t = 2)]
    acts: usize,
    #[arg(long)]
    json: bool,
}

fn run_file(args: &FileArgs, f: fn(&str, Options) -> Output) -> Output {
    match std::fs::read_to_string(&args.file) {
        Ok(text) => f(&text, Options { json: args.json, epsilon: args.epsilon }),
        Err(e) => Output {
            text: format!("cannot read {}: {e}", args.file.display()),
            exit: Exit::Parse,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Validate(a) => run_file(a, commands::cmd_validate),
        Command::Reduce(a) => run_file(a, commands::cmd_reduce),
        Command::Utility(a) => run_file(a, commands::cmd_utility),
        Command::Rank(a) => run_file(a, commands::cmd_rank),
        Command::Bridge(a) => run_file(a, commands::cmd_bridge),
        Command::Search(a) => {
            let bounds = SearchBounds { acts: a.acts, ..SearchBounds::new(a.max_prizes, a.max_delta) };
            commands::cmd_search(bounds, Options { json: a.json, epsilon: None })
        }
    };
    // A closed pipe downstream is not an error worth reporting.
    let _ = if out.exit == Exit::Success {
        writeln!(std::io::stdout(), "{}", out.text)
    } else {
        writeln!(std::io::stderr(), "{}", out.text)
    };
    ExitCode::from(out.exit as u8)
}
