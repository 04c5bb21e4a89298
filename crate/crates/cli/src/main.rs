//! `adreach`: dataset generation, scoring, ranking, evaluation and DOT export.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{unit_interval, CommonArgs, FilterMode, MethodArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<adreach::Error> for CliError {
    fn from(e: adreach::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "adreach", version, about = "Pick brand advertising targets in a social network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an attributed network (edge list, profiles, brand, manifest).
    Gen(GenArgs),
    /// Score every node and write the ranked scores and the top-k.
    Rank(RankArgs),
    /// Compare affinity, utility and random selections.
    Eval(EvalArgs),
    /// Write a DOT graph of the top targets around the brand.
    ExportDot(DotArgs),
}

#[derive(clap::Args, Debug)]
pub struct GenArgs {
    /// Use the topology of this edge list.
    #[arg(long, conflicts_with = "nodes")]
    pub nodes_from: Option<PathBuf>,
    /// Generate a preferential-attachment topology with this many nodes.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Edges added per node by preferential attachment.
    #[arg(long, default_value_t = 4)]
    pub attach: usize,
    /// Triangle-closing probability for preferential attachment.
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub triad: f64,
    /// Number of content topics.
    #[arg(long, default_value_t = 20)]
    pub topics: usize,
    /// Pages per topic [default: nodes / topics, at most 300].
    #[arg(long)]
    pub pages_per_topic: Option<usize>,
    /// Distinct words owned by each topic.
    #[arg(long, default_value_t = 40)]
    pub vocab_per_topic: usize,
    /// Words shared by every topic.
    #[arg(long, default_value_t = 200)]
    pub shared_vocab: usize,
    /// Tokens per page.
    #[arg(long, default_value_t = 200)]
    pub doc_length: usize,
    /// Share of each page drawn from its topic words.
    #[arg(long, default_value_t = 0.6, value_parser = unit_interval)]
    pub topic_fraction: f64,
    /// Link probability between pages of the same topic.
    #[arg(long, default_value_t = 0.9, value_parser = unit_interval)]
    pub intra: f64,
    /// Link probability between pages of different topics.
    #[arg(long, default_value_t = 0.01, value_parser = unit_interval)]
    pub inter: f64,
    /// Number of seed nodes for the content walk.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Topic of the generated brand profile.
    #[arg(long, default_value_t = 0)]
    pub brand_topic: usize,
    /// Tokens in the brand profile.
    #[arg(long, default_value_t = 400)]
    pub brand_length: usize,
    /// Master random seed.
    #[arg(long, default_value_t = config::DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct RankArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Blend weight of a node's own affinity [default: 0.5].
    #[arg(long, value_parser = unit_interval)]
    pub alpha: Option<f64>,
    /// Ranking score [default: utility].
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Pre-ranking filter on affinity or utility >= tau [default: none].
    #[arg(long, value_enum)]
    pub filter: Option<FilterMode>,
    /// Also dump TF-IDF vectors as JSON-lines.
    #[arg(long)]
    pub dump_vectors: bool,
}

#[derive(clap::Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Utility blend weights, comma separated [default: 0.25,0.5,0.75].
    #[arg(long, value_delimiter = ',', value_parser = unit_interval)]
    pub alphas: Option<Vec<f64>>,
    /// Random-baseline trials [default: 100].
    #[arg(long, value_parser = crate::config::positive)]
    pub trials: Option<usize>,
    /// Add fraction-of-total columns to the report.
    #[arg(long)]
    pub fractions: bool,
}

#[derive(clap::Args, Debug)]
pub struct DotArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Blend weight of a node's own affinity [default: 0.5].
    #[arg(long, value_parser = unit_interval)]
    pub alpha: Option<f64>,
    /// Ranking score [default: utility].
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Number of targets drawn around the brand.
    #[arg(long, default_value_t = 10)]
    pub top_n: usize,
    /// Label of the central node [default: brand file name].
    #[arg(long)]
    pub brand_label: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Rank(a) => commands::rank(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::ExportDot(a) => commands::export_dot(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
