use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exact shortest reset words for synchronizing automata.
#[derive(Parser, Debug)]
#[command(name = "shortreset", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report whether each input automaton is synchronizing.
    Check(InputArgs),
    /// Compute a shortest reset word for each input automaton.
    Solve(SolveArgs),
    /// Print automata from a named family or the uniform random model.
    Generate(GenerateArgs),
    /// Sample random automata and aggregate shortest reset lengths.
    Experiment(ExperimentArgs),
    /// Fit `a*sqrt(n - b)` to the mean lengths of several experiment runs.
    Fit(FitArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Automaton file; `-` or absent reads standard input.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Use a built-in family instead of an input file.
    #[arg(long, conflicts_with = "input", requires = "states")]
    family: Option<String>,
    /// State count for `--family`.
    #[arg(long)]
    states: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print the word itself (default).
    #[arg(long, overrides_with = "no_word")]
    word: bool,
    /// Print only the length.
    #[arg(long)]
    no_word: bool,
    /// Cross-check the length with an exhaustive subset search (n <= 24).
    #[arg(long)]
    oracle: bool,
    /// Memory budget before switching to the memoryless mode, e.g. 512M or 2G.
    #[arg(long, value_parser = commands::parse_bytes)]
    memory_limit: Option<usize>,
    /// Weight of the backward list in the step choice (default: alphabet size).
    #[arg(long)]
    ibfs_weight: Option<f64>,
    /// Forward levels run before unreachable states are dropped.
    #[arg(long)]
    warmup_steps: Option<usize>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Family name; without it automata are drawn uniformly at random.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    states: usize,
    #[arg(long, default_value_t = 2)]
    letters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random automata; sample `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    samples: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    states: usize,
    #[arg(long, default_value_t = 2)]
    letters: usize,
    #[arg(long)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Directory receiving records.csv, stats.json and histogram.csv.
    /// Without it one report goes to standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Report written to standard output: records (csv) or stats (json).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Record per-sample wall time (makes the records non-reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long, value_parser = commands::parse_bytes)]
    memory_limit: Option<usize>,
    #[arg(long)]
    ibfs_weight: Option<f64>,
    #[arg(long)]
    warmup_steps: Option<usize>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Stats JSON files from `experiment`, one per state count.
    #[arg(long, short, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// CSV of observed and fitted means.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => commands::check(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Generate(a) => commands::generate(&a),
        Command::Experiment(a) => commands::experiment(&a),
        Command::Fit(a) => commands::fit(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("shortreset: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
