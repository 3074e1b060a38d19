//! Batch front end: manifest in, normalized references, scores, ablation
//! cases and summary tables out.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 input-format error, 3 internal
//! invariant violation. Clap's own usage errors also exit 2.

mod batch;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "nurc-eval",
    version,
    about = "Normalize, score and analyze NURC-convention oral transcripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize references and write per-inquiry .ref files plus diagnostics
    Normalize(NormalizeArgs),
    /// Score hypothesis files and write per-unit records plus summaries
    Score(ScoreArgs),
    /// Build the four phenomenon case sets and score each
    Ablate(AblateArgs),
    /// Per-inquiry annotation census (overlap, incomprehension, hypothesis)
    Stats(StatsArgs),
    /// Re-aggregate summaries (and cross-run comparisons) from records files
    Report(ReportArgs),
    /// Print the built-in normalizer configuration as TOML
    DumpConfig(DumpConfigArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Corpus manifest (columns id, genre, quality, duration, transcript)
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory, created if absent
    #[arg(long)]
    out: PathBuf,
    /// Normalizer configuration TOML (defaults ship in the binary)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default: one per core)
    #[arg(long)]
    jobs: Option<usize>,
    /// Abort the whole batch on the first malformed inquiry
    #[arg(long)]
    strict: bool,
    /// Decimal rendering of tables: machine (0.443) or pt (0,443)
    #[arg(long, default_value = "machine")]
    locale: String,
}

#[derive(Args)]
struct NormalizeArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Directory holding one <inquiry-id>.hyp file per inquiry
    #[arg(long)]
    hyp_dir: PathBuf,
    /// Label recorded with this run (default: the hyp-dir name)
    #[arg(long)]
    run_label: Option<String>,
    /// Compare hypotheses verbatim instead of normalizing them (steps 3–4)
    #[arg(long)]
    raw_hyp: bool,
    /// Summary groupings to emit (repeatable)
    #[arg(long, value_delimiter = ',')]
    group_by: Vec<String>,
}

#[derive(Args)]
struct AblateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Directory holding one <inquiry-id>.hyp file per inquiry
    #[arg(long)]
    hyp_dir: PathBuf,
    /// Label recorded with this run (default: the hyp-dir name)
    #[arg(long)]
    run_label: Option<String>,
    /// Compare hypotheses verbatim instead of normalizing them (steps 3–4)
    #[arg(long)]
    raw_hyp: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Records files from previous score runs (default: <out>/records.json)
    #[arg(long)]
    records: Vec<PathBuf>,
    /// Summary groupings to emit (repeatable)
    #[arg(long, value_delimiter = ',')]
    group_by: Vec<String>,
}

#[derive(Args)]
struct DumpConfigArgs {
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Normalize(args) => commands::normalize::run(args),
        Command::Score(args) => commands::score::run(args),
        Command::Ablate(args) => commands::ablate::run(args),
        Command::Stats(args) => commands::stats::run(args),
        Command::Report(args) => commands::report::run(args),
        Command::DumpConfig(args) => commands::dump_config::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.code())
        }
    }
}
