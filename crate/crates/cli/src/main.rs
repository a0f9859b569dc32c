mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use svmcert_core::fairness::{SimilarityKind, DEFAULT_EPSILON};
use svmcert_core::{DomainTag, Error};

#[derive(Parser, Debug)]
#[command(name = "svmcert", version, about = "Certify robustness and individual fairness of SVMs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify individual fairness row by row and report the lower bound.
    Verify(VerifyArgs),
    /// Lower bound by verification, upper bound by counterexample search.
    Bounds(BoundsArgs),
    /// Abstract feature importance, optionally against PFI and stability.
    Importance(ImportanceArgs),
    /// Accuracy and balanced accuracy of a model on a dataset.
    Eval(EvalArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Model file (JSON).
    #[arg(long)]
    pub model: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Similarity {
    Noise,
    Cat,
    NoiseCat,
}

impl From<Similarity> for SimilarityKind {
    fn from(s: Similarity) -> Self {
        match s {
            Similarity::Noise => SimilarityKind::Noise,
            Similarity::Cat => SimilarityKind::Cat,
            Similarity::NoiseCat => SimilarityKind::NoiseCat,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Interval,
    Raf,
}

impl From<Domain> for DomainTag {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Interval => DomainTag::IntervalOnly,
            Domain::Raf => DomainTag::Raf,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Args, Debug, Clone)]
pub struct Perturbation {
    #[arg(long, value_enum, default_value_t = Similarity::Noise)]
    pub similarity: Similarity,
    #[arg(long, default_value_t = DEFAULT_EPSILON, allow_negative_numbers = true)]
    pub epsilon: f64,
    /// Sensitive categories, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sensitive: Vec<String>,
    #[arg(long, value_enum, default_value_t = Domain::Raf)]
    pub domain: Domain,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub oh: Switch,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dataset file (CSV).
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub perturbation: Perturbation,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub perturbation: Perturbation,
    #[arg(long, default_value_t = 12)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 0.001)]
    pub min_region_fraction: f64,
    /// Per-row search timeout in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub timeout: f64,
}

#[derive(Args, Debug)]
pub struct ImportanceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Also compute permutation feature importance (needs --data).
    #[arg(long)]
    pub pfi: bool,
    #[arg(long, default_value_t = 10)]
    pub n_repeat: usize,
    /// Also rank numeric features by verified stability (needs --data).
    #[arg(long)]
    pub stability: bool,
    /// Noise radius for the stability ranking.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Read importance from the condensed output form.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub oh: Switch,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub data: PathBuf,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(e) if !e.is_input_error() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Importance(a) => commands::importance(a),
        Command::Eval(a) => commands::eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
